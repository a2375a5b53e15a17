#include "maxstable/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "maxstable/variogram.hpp"

namespace maxstable {

ParseError::ParseError(int line, std::string field, std::string reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + (field.empty() ? "" : field + ": ") + reason),
      line_(line), field_(std::move(field)), reason_(std::move(reason)) {}

const char* to_string(Command c) {
  switch (c) {
    case Command::theta: return "theta";
    case Command::verify: return "verify";
    case Command::fidi: return "fidi";
    case Command::bound: return "bound";
    case Command::probe: return "probe";
    case Command::sweep: return "sweep";
  }
  return "?";
}

Command parse_command(const std::string& s) {
  for (auto c : {Command::theta, Command::verify, Command::fidi, Command::bound, Command::probe, Command::sweep}) {
    if (s == to_string(c)) return c;
  }
  throw UsageError("unknown command '" + s + "'");
}

const char* to_string(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::json;
  if (s == "csv") return OutputFormat::csv;
  throw UsageError("unknown format '" + s + "' (json or csv)");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

template <class T>
T parse_number(const std::string& s) {
  T v{};
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for doubles is available but strtod also accepts "inf"
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) throw UsageError("malformed number '" + s + "'");
  } else {
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || s.empty()) throw UsageError("malformed integer '" + s + "'");
  }
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  if (trim(s).empty()) return out;
  for (const auto& t : split(s, ',')) {
    if constexpr (std::is_same_v<T, std::string>) {
      if (t.empty()) throw UsageError("empty list item");
      out.push_back(t);
    } else {
      out.push_back(parse_number<T>(t));
    }
  }
  return out;
}

std::string fmt_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ",";
    if constexpr (std::is_same_v<T, std::string>) {
      out += v[k];
    } else if constexpr (std::is_floating_point_v<T>) {
      out += fmt_double(v[k]);
    } else {
      out += std::to_string(v[k]);
    }
  }
  return out;
}

LatticePoint parse_point(const std::string& s) {
  const auto c = parse_list<LatticePoint::Coord>(s);
  if (c.empty()) throw UsageError("empty lattice point");
  return LatticePoint(std::span<const LatticePoint::Coord>(c));
}

std::string format_point(const LatticePoint& p) {
  std::string out;
  for (int j = 0; j < p.dim(); ++j) {
    if (j) out += ",";
    out += std::to_string(p[j]);
  }
  return out;
}

std::string format_points(const std::vector<LatticePoint>& pts) {
  std::string out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (k) out += ";";
    out += format_point(pts[k]);
  }
  return out;
}

LatticeOrder parse_order(const std::string& s) {
  if (s == "lexicographic") return LatticeOrder::lexicographic;
  if (s == "reversed_lexicographic") return LatticeOrder::reversed_lexicographic;
  throw UsageError("unknown order '" + s + "'");
}

const char* order_name(LatticeOrder o) {
  return o == LatticeOrder::lexicographic ? "lexicographic" : "reversed_lexicographic";
}

// "p:v;p:v" with p comma-separated coordinates
std::vector<std::pair<LatticePoint, double>> parse_weighted_points(const std::string& s) {
  std::vector<std::pair<LatticePoint, double>> out;
  for (const auto& item : split(s, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("expected point:value in '" + item + "'");
    out.emplace_back(parse_point(trim(item.substr(0, colon))), parse_number<double>(trim(item.substr(colon + 1))));
  }
  if (out.empty()) throw UsageError("empty point:value list");
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;
using Getter = std::function<std::optional<std::string>(const ExperimentConfig&)>;

struct Key {
  const char* name;
  Setter set;
  Getter get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"command", [](auto& c, auto& v) { c.command = parse_command(v); },
       [](auto& c) { return std::optional<std::string>(to_string(c.command)); }},
      {"seed", [](auto& c, auto& v) { c.seed = parse_number<std::uint64_t>(v); },
       [](auto& c) { return c.seed ? std::optional<std::string>(std::to_string(*c.seed)) : std::nullopt; }},
      {"replicates",
       [](auto& c, auto& v) {
         if (!v.empty() && v[0] == '-') throw UsageError("replicates must be positive");
         c.replicates = parse_number<std::size_t>(v);
       },
       [](auto& c) { return std::optional<std::string>(std::to_string(c.replicates)); }},
      {"window", [](auto& c, auto& v) { c.window = parse_window(v); },
       [](auto& c) { return c.window ? std::optional<std::string>(format_window(*c.window)) : std::nullopt; }},
      {"methods", [](auto& c, auto& v) { c.methods = parse_list<std::string>(v); },
       [](auto& c) { return c.methods.empty() ? std::nullopt : std::optional<std::string>(join(c.methods)); }},
      {"out", [](auto& c, auto& v) { c.out = v; },
       [](auto& c) { return c.out.empty() ? std::nullopt : std::optional<std::string>(c.out); }},
      {"format", [](auto& c, auto& v) { c.format = parse_format(v); },
       [](auto& c) { return std::optional<std::string>(to_string(c.format)); }},
      {"order", [](auto& c, auto& v) { c.order = parse_order(v); },
       [](auto& c) { return std::optional<std::string>(order_name(c.order)); }},
      {"workers", [](auto& c, auto& v) { c.workers = parse_number<unsigned>(v); },
       [](auto& c) { return std::optional<std::string>(std::to_string(c.workers)); }},
      {"model", [](auto& c, auto& v) { c.model = v; },
       [](auto& c) { return c.model.empty() ? std::nullopt : std::optional<std::string>(c.model); }},
      {"construction",
       [](auto& c, auto& v) {
         if (v != "tail" && v != "native") throw UsageError("construction must be tail or native");
         c.construction = v;
       },
       [](auto& c) { return std::optional<std::string>(c.construction); }},
      {"margin", [](auto& c, auto& v) { c.margin = parse_number<std::int64_t>(v); },
       [](auto& c) { return std::optional<std::string>(std::to_string(c.margin)); }},
      {"tail_fraction",
       [](auto& c, auto& v) {
         c.tail_fraction = parse_number<double>(v);
         if (!(c.tail_fraction > 0.0 && c.tail_fraction < 1.0)) throw UsageError("tail_fraction must lie in (0,1)");
       },
       [](auto& c) { return std::optional<std::string>(fmt_double(c.tail_fraction)); }},
      {"pickands_n", [](auto& c, auto& v) { c.pickands_n = parse_number<std::int64_t>(v); },
       [](auto& c) { return std::optional<std::string>(std::to_string(c.pickands_n)); }},
      {"sweep_n", [](auto& c, auto& v) { c.sweep_n = parse_list<std::int64_t>(v); },
       [](auto& c) { return c.sweep_n.empty() ? std::nullopt : std::optional<std::string>(join(c.sweep_n)); }},
      {"block_n", [](auto& c, auto& v) { c.block_n = parse_number<double>(v); },
       [](auto& c) { return std::optional<std::string>(fmt_double(c.block_n)); }},
      {"block_r", [](auto& c, auto& v) { c.block_r = parse_number<std::int64_t>(v); },
       [](auto& c) { return std::optional<std::string>(std::to_string(c.block_r)); }},
      {"tau", [](auto& c, auto& v) { c.tau = parse_number<double>(v); },
       [](auto& c) { return std::optional<std::string>(fmt_double(c.tau)); }},
      {"block_mode",
       [](auto& c, auto& v) {
         if (v != "identity" && v != "raw" && v != "calibrated") {
           throw UsageError("block_mode must be identity, raw or calibrated");
         }
         c.block_mode = v;
       },
       [](auto& c) { return std::optional<std::string>(c.block_mode); }},
      {"probe_m", [](auto& c, auto& v) { c.probe_m = parse_list<std::int64_t>(v); },
       [](auto& c) { return c.probe_m.empty() ? std::nullopt : std::optional<std::string>(join(c.probe_m)); }},
      {"points", [](auto& c, auto& v) { c.points = parse_points(v); },
       [](auto& c) { return c.points.empty() ? std::nullopt : std::optional<std::string>(format_points(c.points)); }},
      {"thresholds", [](auto& c, auto& v) { c.thresholds = parse_list<double>(v); },
       [](auto& c) {
         return c.thresholds.empty() ? std::nullopt : std::optional<std::string>(join(c.thresholds));
       }},
      {"tilt_point", [](auto& c, auto& v) { c.tilt_point = parse_point(v); },
       [](auto& c) {
         return c.tilt_point ? std::optional<std::string>(format_point(*c.tilt_point)) : std::nullopt;
       }},
      {"identities", [](auto& c, auto& v) { c.identities = parse_list<std::string>(v); },
       [](auto& c) { return c.identities.empty() ? std::nullopt : std::optional<std::string>(join(c.identities)); }},
      {"checks", [](auto& c, auto& v) { c.checks = parse_number<std::size_t>(v); },
       [](auto& c) { return std::optional<std::string>(std::to_string(c.checks)); }},
  };
  return k;
}

const std::set<std::string>& model_keys(const std::string& family) {
  static const std::map<std::string, std::set<std::string>> k = {
      {"brown_resnick", {"family", "variogram", "dim", "scale", "exponent", "table", "table_file", "alpha"}},
      {"sequence", {"family", "coeffs", "start", "entries", "alpha"}},
      {"independent", {"family", "dim", "alpha"}},
      {"alternating", {"family", "alpha"}},
      {"product", {"family", "factors"}},
      {"mixture", {"family", "p", "components"}},
      {"from_tail", {"family", "tail", "weights", "support"}},
  };
  const auto it = k.find(family);
  if (it == k.end()) throw UsageError("unknown model family '" + family + "'");
  return it->second;
}

ModelRef build_named(const ExperimentConfig& c, const std::string& name, int ref_line, int depth) {
  const auto it = c.models.find(name);
  if (it == c.models.end()) throw ParseError(ref_line, "model", "no [model." + name + "] table");
  if (depth > 16) throw ParseError(ref_line, "model", "model references nest too deeply (cycle?)");
  const ModelTable& t = it->second;
  const std::string prefix = "model." + name + ".";
  auto line_of = [&](const std::string& f) {
    const auto l = t.lines.find(f);
    return l == t.lines.end() ? ref_line : l->second;
  };
  auto get = [&](const std::string& f) -> std::optional<std::string> {
    const auto v = t.fields.find(f);
    if (v == t.fields.end()) return std::nullopt;
    return v->second;
  };
  auto need = [&](const std::string& f) {
    auto v = get(f);
    if (!v) throw ParseError(line_of("family"), prefix + f, "missing required field");
    return *v;
  };
  // Runs fn and maps library errors to the line of field f.
  auto at = [&](const std::string& f, auto&& fn) {
    try {
      return fn();
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(line_of(f), prefix + f, e.what());
    }
  };
  auto num = [&](const std::string& f, double dflt) {
    auto v = get(f);
    return v ? at(f, [&] { return parse_number<double>(*v); }) : dflt;
  };
  auto integer = [&](const std::string& f, std::int64_t dflt) {
    auto v = get(f);
    return v ? at(f, [&] { return parse_number<std::int64_t>(*v); }) : dflt;
  };

  const std::string family = need("family");
  const auto& allowed = at("family", [&]() -> const std::set<std::string>& { return model_keys(family); });
  for (const auto& [k, _] : t.fields) {
    if (!allowed.count(k)) throw ParseError(line_of(k), prefix + k, "unknown field for family " + family);
  }
  const double alpha = num("alpha", 1.0);

  if (family == "brown_resnick") {
    const std::string kind = get("variogram").value_or("power");
    Variogram v = at("variogram", [&] {
      if (kind == "power") {
        return Variogram::power(static_cast<int>(integer("dim", 1)), num("scale", 1.0), num("exponent", 1.0));
      }
      if (kind == "table") {
        if (auto file = get("table_file")) return at("table_file", [&] { return load_variogram_table(*file); });
        return at("table", [&] {
          auto rows = parse_weighted_points(need("table"));
          return Variogram::table(std::move(rows));
        });
      }
      throw UsageError("variogram must be power or table");
    });
    return at("family", [&] { return brown_resnick(std::move(v), alpha); });
  }
  if (family == "sequence") {
    if (auto e = get("entries")) {
      return at("entries", [&] { return sequence_model(parse_weighted_points(*e), alpha); });
    }
    const auto coeffs = at("coeffs", [&] { return parse_list<double>(need("coeffs")); });
    const std::int64_t start = integer("start", 0);
    std::vector<std::pair<LatticePoint, double>> cs;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      cs.emplace_back(LatticePoint{start + static_cast<std::int64_t>(k)}, coeffs[k]);
    }
    return at("coeffs", [&] { return sequence_model(std::move(cs), alpha); });
  }
  if (family == "independent") {
    return at("dim", [&] { return independent_model(static_cast<int>(integer("dim", 1)), alpha); });
  }
  if (family == "alternating") return at("alpha", [&] { return alternating_model(alpha); });
  if (family == "product" || family == "mixture") {
    const std::string field = family == "product" ? "factors" : "components";
    const auto parts = at(field, [&] { return parse_list<std::string>(need(field)); });
    if (parts.size() != 2) throw ParseError(line_of(field), prefix + field, "expected exactly two model names");
    auto a = build_named(c, parts[0], line_of(field), depth + 1);
    auto b = build_named(c, parts[1], line_of(field), depth + 1);
    if (family == "product") return at(field, [&] { return product_model(a, b); });
    const double p = at("p", [&] { return parse_number<double>(need("p")); });
    return at("p", [&] { return mixture_model(p, a, b); });
  }
  // from_tail
  auto tail = build_named(c, need("tail"), line_of("tail"), depth + 1);
  std::vector<std::pair<LatticePoint, double>> weights;
  if (auto w = get("weights")) {
    weights = at("weights", [&] { return parse_weighted_points(*w); });
  } else {
    const Window s = at("support", [&] { return parse_window(need("support")); });
    for (const auto& p : window_points(s)) weights.emplace_back(p, 1.0);
  }
  return at("weights", [&] { return from_tail_model(tail, std::move(weights)); });
}

}  // namespace

Window parse_window(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.empty() || static_cast<int>(parts.size()) > kMaxDim) throw UsageError("malformed window '" + s + "'");
  LatticePoint lo(static_cast<int>(parts.size())), hi(static_cast<int>(parts.size()));
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const auto dots = parts[j].find("..");
    if (dots == std::string::npos) throw UsageError("malformed window range '" + parts[j] + "' (expected a..b)");
    lo[static_cast<int>(j)] = parse_number<std::int64_t>(trim(parts[j].substr(0, dots)));
    hi[static_cast<int>(j)] = parse_number<std::int64_t>(trim(parts[j].substr(dots + 2)));
  }
  return Window(lo, hi);
}

std::string format_window(const Window& w) {
  std::string out;
  for (int j = 0; j < w.dim(); ++j) {
    if (j) out += ",";
    out += std::to_string(w.lower()[j]) + ".." + std::to_string(w.upper()[j]);
  }
  return out;
}

std::vector<LatticePoint> parse_points(const std::string& s) {
  std::vector<LatticePoint> out;
  for (const auto& item : split(s, ';')) {
    if (item.empty()) throw UsageError("empty point in '" + s + "'");
    out.push_back(parse_point(item));
  }
  return out;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return serialize_config(*this) == serialize_config(o);
}

ExperimentConfig parse_config(const std::string& text, const std::map<std::string, std::string>& overrides) {
  ExperimentConfig c;
  std::map<std::string, int> seen;
  ModelTable* table = nullptr;
  std::string table_name;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "", "unterminated table header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.rfind("model.", 0) != 0 || name.size() == 6) {
        throw ParseError(lineno, name, "table headers must be [model.NAME]");
      }
      table_name = name.substr(6);
      if (c.models.count(table_name)) throw ParseError(lineno, name, "duplicate model table");
      table = &c.models[table_name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "", "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "", "empty key");
    if (table) {
      if (table->fields.count(key)) throw ParseError(lineno, "model." + table_name + "." + key, "duplicate field");
      table->fields[key] = value;
      table->lines[key] = lineno;
      continue;
    }
    const auto& ks = keys();
    const auto it = std::find_if(ks.begin(), ks.end(), [&](const Key& k) { return key == k.name; });
    if (it == ks.end()) throw ParseError(lineno, key, "unknown field");
    if (seen.count(key)) throw ParseError(lineno, key, "duplicate field");
    seen[key] = lineno;
    try {
      it->set(c, value);
    } catch (const std::exception& e) {
      throw ParseError(lineno, key, e.what());
    }
  }

  for (const auto& [key, value] : overrides) {
    const auto& ks = keys();
    const auto it = std::find_if(ks.begin(), ks.end(), [&](const Key& k) { return key == k.name; });
    if (it == ks.end()) throw ParseError(0, key, "unknown field");
    try {
      it->set(c, value);
    } catch (const std::exception& e) {
      throw ParseError(0, key, e.what());
    }
    seen[key] = 0;
  }

  auto line_of = [&](const std::string& k) {
    const auto s = seen.find(k);
    return s == seen.end() ? 0 : s->second;
  };
  if (!c.seed) throw ParseError(0, "seed", "missing required field");
  if (c.replicates < 100) throw ParseError(line_of("replicates"), "replicates", "must be at least 100");
  if (c.model.empty()) {
    if (c.models.size() != 1) {
      throw ParseError(0, "model", c.models.empty() ? "no [model.NAME] table" : "several model tables; set model = NAME");
    }
    c.model = c.models.begin()->first;
  }
  if (c.points.size() != c.thresholds.size()) {
    throw ParseError(line_of("thresholds"), "thresholds", "needs one threshold per point");
  }
  const ModelRef m = build_named(c, c.model, line_of("model"), 0);
  const int d = model_dim(*m);
  if (c.window && c.window->dim() != d) {
    throw ParseError(line_of("window"), "window", "dimension differs from the model dimension " + std::to_string(d));
  }
  for (const auto& p : c.points) {
    if (p.dim() != d) throw ParseError(line_of("points"), "points", "dimension differs from the model dimension");
  }
  for (const auto& id : c.identities) {
    if (id != "tsf_Z" && id != "tsf_theta" && id != "tilt") {
      throw ParseError(line_of("identities"), "identities", "unknown identity '" + id + "'");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "config", "cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str(), overrides);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  for (const auto& k : keys()) {
    if (auto v = k.get(c)) out << k.name << " = " << *v << "\n";
  }
  for (const auto& [name, t] : c.models) {
    out << "\n[model." << name << "]\n";
    for (const auto& [k, v] : t.fields) out << k << " = " << v << "\n";
  }
  return out.str();
}

ModelRef build_model(const ExperimentConfig& c) { return build_model(c, c.model); }

ModelRef build_model(const ExperimentConfig& c, const std::string& name) { return build_named(c, name, 0, 0); }

}  // namespace maxstable
