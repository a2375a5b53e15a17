#include "maxstable/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maxstable {

TestFunctional TestFunctional::coordinate_ratio(LatticePoint a, LatticePoint b) {
  require_same_dim(a, b);
  TestFunctional f;
  f.kind = Kind::coordinate_ratio;
  f.a = a;
  f.b = b;
  return f;
}

TestFunctional TestFunctional::anchor_indicator(LatticePoint j, Window frame) {
  if (!frame.contains(j)) throw UsageError("anchor point " + j.to_string() + " lies outside the frame");
  TestFunctional f;
  f.kind = Kind::anchor_indicator;
  f.a = j;
  f.b = j;
  f.frame = std::move(frame);
  return f;
}

TestFunctional TestFunctional::exceed_indicator(LatticePoint a, double c) {
  if (!(c > 0.0)) throw UsageError("exceedance factor c must be positive");
  TestFunctional f;
  f.kind = Kind::exceed_indicator;
  f.b = LatticePoint::origin(a.dim());
  f.a = std::move(a);
  f.c = c;
  return f;
}

double TestFunctional::shifted(const FieldSample& f, const LatticePoint& h) const {
  auto at = [&](const LatticePoint& t) { return f.value_or(t - h, 0.0); };
  switch (kind) {
    case Kind::coordinate_ratio: {
      const double x = at(a), y = at(b);
      return x + y > 0.0 ? x / (x + y) : 0.0;
    }
    case Kind::exceed_indicator:
      return at(a) > c * at(b) ? 1.0 : 0.0;
    case Kind::anchor_indicator: {
      double best = 0.0;
      std::optional<LatticePoint> arg;
      for (std::size_t k = 0; k < frame.size(); ++k) {
        const LatticePoint t = frame.point(k);  // ascending lexicographic
        const double v = at(t);
        if (v > best) {
          best = v;
          arg = t;
        }
      }
      return arg && *arg == a ? 1.0 : 0.0;
    }
  }
  return 0.0;
}

Window TestFunctional::reach() const {
  if (kind == Kind::anchor_indicator) return frame;
  const std::vector<LatticePoint> pts{a, b};
  return Window::bounding(pts);
}

std::string TestFunctional::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::coordinate_ratio: os << "coordinate_ratio(" << a.to_string() << "," << b.to_string() << ")"; break;
    case Kind::anchor_indicator: os << "anchor_indicator(" << a.to_string() << " in " << frame.to_string() << ")"; break;
    case Kind::exceed_indicator: os << "exceed_indicator(" << a.to_string() << ",c=" << c << ")"; break;
  }
  return os.str();
}

IdentityReport make_identity_report(std::string name, EstimateReport lhs, EstimateReport rhs, double allowance) {
  IdentityReport r;
  r.name = std::move(name);
  const double se = combined_stderr(lhs, rhs);
  const double diff = lhs.estimate - rhs.estimate;
  const double slack = 1e-12 * std::max({1.0, std::abs(lhs.estimate), std::abs(rhs.estimate)});
  r.z_score = se > 0.0 ? diff / se : (std::abs(diff) <= slack ? 0.0 : std::copysign(kInfinity, diff));
  r.allowance = allowance;
  r.pass = std::abs(diff) <= 4.0 * se + allowance + slack;
  r.lhs = std::move(lhs);
  r.rhs = std::move(rhs);
  return r;
}

namespace {

double power(double v, double alpha) { return alpha == 1.0 ? v : std::pow(v, alpha); }

Window needed_window(const TestFunctional& f, const LatticePoint& h) {
  const Window k = f.reach();
  const LatticePoint o = LatticePoint::origin(h.dim());
  std::vector<LatticePoint> pts{k.lower(), k.upper(), k.lower() - h, k.upper() - h, o, h, -h};
  return Window::bounding(pts);
}

void require_window(const Window& have, const Window& need) {
  if (!have.contains(need)) {
    throw UsageError("window " + have.to_string() + " is too small for the shifted functional; needs " +
                     need.to_string());
  }
}

// Runs paired draws; fn(eng, lhs, rhs) returns one value for each side.
template <class Fn>
std::pair<EstimateReport, EstimateReport> paired(std::size_t replicates, const RngStream& rng, const Window& w,
                                                 Fn&& fn) {
  const auto acc = run_chunked(replicates, rng, MomentsVec(2), [&](Engine& eng, std::size_t n, MomentsVec& a) {
    for (std::size_t r = 0; r < n; ++r) {
      double lhs = 0.0, rhs = 0.0;
      fn(eng, lhs, rhs);
      a[0].add(lhs);
      a[1].add(rhs);
    }
  });
  return {EstimateReport::from_moments("lhs", acc[0], w), EstimateReport::from_moments("rhs", acc[1], w)};
}

std::string label(const char* what, const TestFunctional& f, const LatticePoint& h) {
  return std::string(what) + " h=" + h.to_string() + " F=" + f.describe();
}

}  // namespace

IdentityReport check_tsf_Z(const ZSampler& z, double alpha, const LatticePoint& h, const TestFunctional& f,
                           std::size_t replicates, const RngStream& rng) {
  require_window(z.window(), needed_window(f, h));
  const LatticePoint o = LatticePoint::origin(h.dim());
  auto [l, r] = paired(replicates, rng, z.window(), [&](Engine& eng, double& lhs, double& rhs) {
    std::vector<Entry> e;
    z.draw(eng, e);
    const FieldSample s = to_dense(e, z.window(), FieldTag::Z);
    lhs = power(s.at(h), alpha) * f(s);
    rhs = power(s.at(o), alpha) * f.shifted(s, h);
  });
  return make_identity_report(label("tsf_Z", f, h), std::move(l), std::move(r));
}

IdentityReport check_tsf_Z(const ModelSpec& m, const LatticePoint& h, const TestFunctional& f,
                           std::size_t replicates, const RngStream& rng, const SpectralOptions& opt) {
  const auto z = make_z_sampler(m, needed_window(f, h), opt);
  return check_tsf_Z(*z, model_alpha(m), h, f, replicates, rng);
}

IdentityReport check_tsf_theta(const ThetaSampler& s, double alpha, const LatticePoint& h, const TestFunctional& f,
                               std::size_t replicates, const RngStream& rng) {
  require_window(s.host(), needed_window(f, h));
  auto [l, r] = paired(replicates, rng, s.host(), [&](Engine& eng, double& lhs, double& rhs) {
    std::vector<Entry> e;
    s.draw(eng, e);
    const FieldSample t = to_dense(e, s.host(), FieldTag::Theta);
    lhs = power(t.at(h), alpha) * f(t);
    rhs = t.at(-h) != 0.0 ? f.shifted(t, h) : 0.0;
  });
  return make_identity_report(label("tsf_theta", f, h), std::move(l), std::move(r));
}

IdentityReport check_tsf_theta(const ModelSpec& m, const LatticePoint& h, const TestFunctional& f,
                               std::size_t replicates, const RngStream& rng) {
  const auto s = make_theta_sampler(m, needed_window(f, h));
  return check_tsf_theta(*s, model_alpha(m), h, f, replicates, rng);
}

IdentityReport check_tilt_identity(const ThetaSampler& s, double alpha, const LatticePoint& i, double t,
                                   const TestFunctional& f, std::size_t replicates, const RngStream& rng) {
  if (!(t > 0.0)) throw UsageError("tilt level t must be positive");
  require_window(s.host(), needed_window(f, i));
  const double ta = power(t, alpha);
  auto [l, r] = paired(replicates, rng, s.host(), [&](Engine& eng, double& lhs, double& rhs) {
    std::vector<Entry> e;
    s.draw(eng, e);
    const double radius = pareto(eng, alpha);
    for (auto& q : e) q.value *= radius;
    const FieldSample y = to_dense(e, s.host(), FieldTag::Y);
    lhs = y.at(i) > 1.0 / t ? f(y.scaled(t)) : 0.0;
    rhs = y.at(-i) > t ? ta * f.shifted(y, i) : 0.0;
  });
  std::ostringstream name;
  name << "tilt i=" << i.to_string() << " t=" << t << " F=" << f.describe();
  return make_identity_report(name.str(), std::move(l), std::move(r));
}

IdentityReport check_tilt_identity(const ModelSpec& m, const LatticePoint& i, double t, const TestFunctional& f,
                                   std::size_t replicates, const RngStream& rng) {
  const auto s = make_theta_sampler(m, needed_window(f, i));
  return check_tilt_identity(*s, model_alpha(m), i, t, f, replicates, rng);
}

IdentityReport check_y_fidi(const ModelSpec& m, const LatticePoint& h, std::span<const LatticePoint> points,
                            std::span<const double> thresholds, std::size_t replicates, const RngStream& rng,
                            const YFidiOptions& opt) {
  if (!(opt.level > 0.0)) throw UsageError("conditioning level must be positive");
  std::vector<LatticePoint> all(points.begin(), points.end());
  all.push_back(h);
  const Window w = Window::bounding(all);
  MaxStableSimulator sim(m, w, opt.series, {}, rng.child(2));
  const std::size_t hi = w.index(h);
  std::vector<std::size_t> idx;
  for (const auto& p : points) idx.push_back(w.index(p));

  // slot 0: indicator of the joint event among conditioning events; slot 1: event rate
  const auto acc = run_chunked(replicates, rng.child(0), MomentsVec(2), [&](Engine& eng, std::size_t n, MomentsVec& a) {
    std::vector<double> x;
    for (std::size_t r = 0; r < n; ++r) {
      sim.simulate(eng, x);
      const bool event = x[hi] > opt.level;
      a[1].add(event ? 1.0 : 0.0);
      if (!event) continue;
      bool inside = true;
      for (std::size_t k = 0; k < idx.size() && inside; ++k) inside = x[idx[k]] / opt.level <= thresholds[k];
      a[0].add(inside ? 1.0 : 0.0);
    }
  });
  auto lhs = EstimateReport::from_moments("conditional_cdf", acc[0], w);
  lhs.diagnostics["events"] = static_cast<double>(acc[0].count());
  lhs.diagnostics["event_rate"] = acc[1].mean();
  auto rhs = y_fidi_cdf(m, h, points, thresholds, replicates, rng.child(1));
  std::ostringstream name;
  name << "y_fidi h=" << h.to_string() << " u=" << opt.level;
  auto rep = make_identity_report(name.str(), std::move(lhs), std::move(rhs), opt.bias_allowance);
  if (acc[0].count() < opt.min_events) {
    rep.inconclusive = true;
    rep.pass = false;
  }
  return rep;
}

const char* to_string(IdentityKind k) {
  switch (k) {
    case IdentityKind::tsf_Z: return "tsf_Z";
    case IdentityKind::tsf_theta: return "tsf_theta";
    case IdentityKind::tilt: return "tilt";
  }
  return "?";
}

namespace {

struct RandomCheck {
  TestFunctional f;
  LatticePoint h;
  double t = 1.0;
};

std::vector<RandomCheck> random_checks(int dim, std::size_t count, const RngStream& rng) {
  Engine eng = rng.engine();
  std::uniform_int_distribution<int> coord(-2, 2), kind(0, 2), level(0, 2);
  const double levels[] = {0.5, 1.0, 2.0};
  const double factors[] = {0.5, 0.8, 1.25};
  auto point = [&](bool nonzero) {
    for (;;) {
      LatticePoint p(dim);
      for (int j = 0; j < dim; ++j) p[j] = coord(eng);
      if (!nonzero || !p.is_origin()) return p;
    }
  };
  std::vector<RandomCheck> out;
  for (std::size_t k = 0; k < count; ++k) {
    RandomCheck c;
    c.h = point(true);
    switch (kind(eng)) {
      case 0: {
        const LatticePoint a = point(false);
        LatticePoint b = point(false);
        while (b == a) b = point(false);
        c.f = TestFunctional::coordinate_ratio(a, b);
        break;
      }
      case 1:
        c.f = TestFunctional::anchor_indicator(point(false), Window::cube(dim, -2, 2));
        break;
      default:
        c.f = TestFunctional::exceed_indicator(point(true), factors[level(eng)]);
        break;
    }
    c.t = levels[level(eng)];
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<IdentityReport> identity_suite(IdentityKind kind, const ModelSpec& m, std::size_t count,
                                           std::size_t replicates, const RngStream& rng) {
  const auto checks = random_checks(model_dim(m), count, rng.child(0));
  std::vector<IdentityReport> out;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const auto& c = checks[k];
    const RngStream s = rng.child(k + 1);
    switch (kind) {
      case IdentityKind::tsf_Z: out.push_back(check_tsf_Z(m, c.h, c.f, replicates, s)); break;
      case IdentityKind::tsf_theta: out.push_back(check_tsf_theta(m, c.h, c.f, replicates, s)); break;
      case IdentityKind::tilt: out.push_back(check_tilt_identity(m, c.h, c.t, c.f, replicates, s)); break;
    }
  }
  return out;
}

std::vector<IdentityReport> identity_suite(IdentityKind kind, const ThetaSampler& sampler, double alpha,
                                           std::size_t count, std::size_t replicates, const RngStream& rng) {
  if (kind == IdentityKind::tsf_Z) throw UsageError("the Z identity needs a model, not a Theta sampler");
  const auto checks = random_checks(sampler.dim(), count, rng.child(0));
  std::vector<IdentityReport> out;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const auto& c = checks[k];
    const RngStream s = rng.child(k + 1);
    if (kind == IdentityKind::tsf_theta) {
      out.push_back(check_tsf_theta(sampler, alpha, c.h, c.f, replicates, s));
    } else {
      out.push_back(check_tilt_identity(sampler, alpha, c.h, c.t, c.f, replicates, s));
    }
  }
  return out;
}

}  // namespace maxstable
