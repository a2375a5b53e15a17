#include "maxstable/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace maxstable {

const char* to_string(AnchorMap::Kind k) {
  switch (k) {
    case AnchorMap::Kind::first_max: return "first_max";
    case AnchorMap::Kind::last_max: return "last_max";
    case AnchorMap::Kind::first_exceed: return "first_exceed";
    case AnchorMap::Kind::last_exceed: return "last_exceed";
  }
  return "?";
}

AnchorMap::Kind parse_anchor_kind(const std::string& name) {
  for (auto k : {AnchorMap::Kind::first_max, AnchorMap::Kind::last_max, AnchorMap::Kind::first_exceed,
                 AnchorMap::Kind::last_exceed}) {
    if (name == to_string(k)) return k;
  }
  throw UsageError("unknown anchoring map '" + name + "'");
}

AnchorResult apply_anchor(const AnchorMap& map, std::span<const Entry> entries, const Window& w) {
  using K = AnchorMap::Kind;
  const bool want_first = map.kind == K::first_max || map.kind == K::first_exceed;
  const bool by_max = map.kind == K::first_max || map.kind == K::last_max;

  double level = 1.0;  // exceedance maps: strictly above 1
  if (by_max) {
    level = 0.0;
    for (const auto& e : entries) level = std::max(level, e.value);
    if (!(level > 0.0)) return {};
  }
  const Entry* best = nullptr;
  for (const auto& e : entries) {
    const bool hit = by_max ? e.value == level : e.value > 1.0;
    if (!hit) continue;
    if (!best) {
      best = &e;
      continue;
    }
    const bool before = order_less(map.order, e.at, best->at);
    if (before == want_first) best = &e;
  }
  if (!best) return {};
  return {best->at, w.on_boundary(best->at)};
}

AnchorResult apply_anchor(const AnchorMap& map, const FieldSample& f) {
  const auto e = to_sparse(f);
  return apply_anchor(map, e, f.window());
}

AnchorResult first_max(const FieldSample& f, LatticeOrder order) {
  return apply_anchor({AnchorMap::Kind::first_max, order}, f);
}
AnchorResult last_max(const FieldSample& f, LatticeOrder order) {
  return apply_anchor({AnchorMap::Kind::last_max, order}, f);
}
AnchorResult first_exceed(const FieldSample& f, LatticeOrder order) {
  return apply_anchor({AnchorMap::Kind::first_exceed, order}, f);
}
AnchorResult last_exceed(const FieldSample& f, LatticeOrder order) {
  return apply_anchor({AnchorMap::Kind::last_exceed, order}, f);
}

SumResult sum_alpha(std::span<const Entry> entries, const Window& w, double alpha, double tail_fraction) {
  SumResult r;
  double shell = 0.0;
  for (const auto& e : entries) {
    const double v = alpha == 1.0 ? e.value : std::pow(e.value, alpha);
    r.value += v;
    if (w.on_boundary(e.at)) shell += v;
  }
  r.shell_fraction = r.value > 0.0 ? shell / r.value : 0.0;
  r.tail_flag = r.shell_fraction > tail_fraction;
  return r;
}

SumResult sum_alpha(const FieldSample& f, double alpha, double tail_fraction) {
  const auto e = to_sparse(f);
  return sum_alpha(e, f.window(), alpha, tail_fraction);
}

CountResult exceed_count(std::span<const Entry> entries, const Window& w) {
  CountResult r;
  for (const auto& e : entries) {
    if (e.value > 1.0) {
      ++r.count;
      if (w.on_boundary(e.at)) r.tail_flag = true;
    }
  }
  return r;
}

CountResult exceed_count(const FieldSample& f) {
  if (f.tag() != FieldTag::Y) {
    throw UsageError(std::string("exceed_count needs a Y sample, got ") + to_string(f.tag()));
  }
  const auto e = to_sparse(f);
  return exceed_count(e, f.window());
}

namespace {

std::vector<LatticePoint> default_shifts(int dim) {
  std::vector<LatticePoint> out;
  for (const auto& h : window_points(Window::cube(dim, -2, 2))) {
    if (!h.is_origin()) out.push_back(h);
  }
  return out;
}

std::string describe(const AnchorResult& r) { return r.value ? r.value->to_string() : "inf"; }

}  // namespace

AnchoringReport check_anchoring(const AnchorFunction& map, std::span<const FieldSample> samples,
                                std::span<const LatticePoint> shifts) {
  AnchoringReport rep;
  for (const auto& f : samples) {
    ++rep.samples;
    std::vector<LatticePoint> own;
    if (shifts.empty()) own = default_shifts(f.window().dim());
    std::span<const LatticePoint> hs = shifts.empty() ? std::span<const LatticePoint>(own) : shifts;

    const AnchorResult base = map(f);
    ++rep.checks;
    if (base.value) {
      const double at = f.value_or(*base.value, 0.0);
      const double ref = std::min(f.value_or(LatticePoint::origin(f.window().dim()), 0.0), 1.0);
      if (at < ref) {
        ++rep.violations_value;
        if (rep.messages.size() < 10) {
          rep.messages.push_back("value at anchor " + base.value->to_string() + " below min(f(0),1)");
        }
      }
    }
    for (const auto& h : hs) {
      ++rep.checks;
      const AnchorResult moved = map(shift_field(f, h));
      bool ok = moved.is_infinite() == base.is_infinite();
      if (ok && base.value) ok = *moved.value == *base.value + h;
      if (!ok) {
        ++rep.violations_shift;
        if (rep.messages.size() < 10) {
          rep.messages.push_back("shift " + h.to_string() + ": anchor " + describe(moved) + ", expected " +
                                 (base.value ? (*base.value + h).to_string() : std::string("inf")));
        }
      }
    }
  }
  return rep;
}

AnchoringReport check_anchoring(const AnchorMap& map, std::span<const FieldSample> samples,
                                std::span<const LatticePoint> shifts) {
  return check_anchoring([map](const FieldSample& f) { return apply_anchor(map, f); }, samples, shifts);
}

}  // namespace maxstable
