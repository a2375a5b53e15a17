#include "maxstable/variogram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace maxstable {

Variogram Variogram::power(int dim, double scale, double exponent) {
  if (!(scale > 0.0) || !(exponent > 0.0) || exponent > 2.0) {
    throw ModelError("power variogram needs scale > 0 and exponent in (0, 2]");
  }
  Variogram v;
  v.kind_ = Kind::power;
  v.dim_ = LatticePoint(dim).dim();
  v.scale_ = scale;
  v.exponent_ = exponent;
  return v;
}

Variogram Variogram::table(std::vector<std::pair<LatticePoint, double>> values) {
  if (values.empty()) throw ModelError("variogram table is empty");
  const int dim = values.front().first.dim();
  std::vector<std::pair<LatticePoint, double>> all;
  for (const auto& [h, g] : values) {
    if (h.dim() != dim) throw ModelError("variogram table mixes dimensions");
    if (!(g >= 0.0) || !std::isfinite(g)) {
      throw ModelError("variogram value at " + h.to_string() + " must be finite and >= 0");
    }
    if (h.is_origin() && g != 0.0) throw ModelError("variogram must vanish at the origin");
    all.emplace_back(h, g);
  }
  auto by_lex = [](const auto& a, const auto& b) { return lex_less(a.first, b.first); };
  std::sort(all.begin(), all.end(), by_lex);
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i].first == all[i - 1].first && all[i].second != all[i - 1].second) {
      throw ModelError("conflicting variogram values at " + all[i].first.to_string());
    }
  }
  all.erase(std::unique(all.begin(), all.end(),
                        [](const auto& a, const auto& b) { return a.first == b.first; }),
            all.end());

  // symmetric completion
  std::vector<std::pair<LatticePoint, double>> mirrored;
  for (const auto& [h, g] : all) {
    const LatticePoint m = -h;
    auto it = std::lower_bound(all.begin(), all.end(), std::make_pair(m, 0.0), by_lex);
    if (it == all.end() || !(it->first == m)) {
      mirrored.emplace_back(m, g);
    } else if (it->second != g) {
      throw ModelError("variogram table is not symmetric at " + h.to_string());
    }
  }
  all.insert(all.end(), mirrored.begin(), mirrored.end());
  LatticePoint o = LatticePoint::origin(dim);
  if (std::none_of(all.begin(), all.end(), [&](const auto& e) { return e.first == o; })) {
    all.emplace_back(o, 0.0);
  }
  std::sort(all.begin(), all.end(), by_lex);

  Variogram v;
  v.kind_ = Kind::table;
  v.dim_ = dim;
  v.table_ = std::move(all);
  return v;
}

bool Variogram::defined_at(const LatticePoint& h) const {
  if (h.dim() != dim_) return false;
  if (kind_ == Kind::power) return true;
  auto it = std::lower_bound(table_.begin(), table_.end(), h,
                             [](const auto& e, const LatticePoint& q) { return lex_less(e.first, q); });
  return it != table_.end() && it->first == h;
}

double Variogram::operator()(const LatticePoint& h) const {
  if (h.dim() != dim_) throw UsageError("variogram dimension mismatch at " + h.to_string());
  if (kind_ == Kind::power) {
    if (h.is_origin()) return 0.0;
    return scale_ * std::pow(h.euclidean_norm(), exponent_);
  }
  auto it = std::lower_bound(table_.begin(), table_.end(), h,
                             [](const auto& e, const LatticePoint& q) { return lex_less(e.first, q); });
  if (it == table_.end() || !(it->first == h)) {
    throw ModelError("variogram table has no value at offset " + h.to_string());
  }
  return it->second;
}

Variogram read_variogram_table(std::istream& in) {
  std::vector<std::pair<LatticePoint, double>> rows;
  std::string line;
  int lineno = 0;
  int dim = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string tok; ls >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens.size() < 2) {
      throw ModelError("variogram table line " + std::to_string(lineno) + ": expected offset and value");
    }
    const int d = static_cast<int>(tokens.size()) - 1;
    if (dim == -1) dim = d;
    if (d != dim) {
      throw ModelError("variogram table line " + std::to_string(lineno) + ": inconsistent dimension");
    }
    try {
      std::vector<LatticePoint::Coord> c;
      for (int j = 0; j < d; ++j) {
        std::size_t used = 0;
        c.push_back(std::stoll(tokens[j], &used));
        if (used != tokens[j].size()) throw std::invalid_argument("trailing characters");
      }
      std::size_t used = 0;
      const double g = std::stod(tokens.back(), &used);
      if (used != tokens.back().size()) throw std::invalid_argument("trailing characters");
      rows.emplace_back(LatticePoint(std::span<const LatticePoint::Coord>(c)), g);
    } catch (const std::logic_error&) {
      throw ModelError("variogram table line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return Variogram::table(std::move(rows));
}

Variogram load_variogram_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open variogram table " + path);
  return read_variogram_table(in);
}

}  // namespace maxstable
