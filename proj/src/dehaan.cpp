#include "maxstable/dehaan.hpp"

#include <algorithm>
#include <cmath>

namespace maxstable {

void SeriesControl::validate() const {
  if (max_terms < 1) throw UsageError("max_terms must be at least 1");
  if (!(quantile_guard > 0.0 && quantile_guard < 1.0)) throw UsageError("quantile_guard must lie in (0,1)");
  if (!(relative_floor > 0.0)) throw UsageError("relative_floor must be positive");
  if (pilot_draws < 1) throw UsageError("pilot_draws must be at least 1");
}

MaxStableSimulator::MaxStableSimulator(const ModelSpec& m, Window w, SeriesControl ctrl, const SpectralOptions& opt,
                                       const RngStream& pilot)
    : z_(make_z_sampler(m, w, opt)), ctrl_(ctrl), alpha_(model_alpha(m)) {
  ctrl_.validate();
  if (auto b = z_->sup_bound()) {
    bound_ = *b;
    bound_exact_ = true;
    return;
  }
  Engine eng = pilot.engine();
  std::vector<double> maxima;
  std::vector<Entry> e;
  maxima.reserve(ctrl_.pilot_draws);
  for (std::size_t k = 0; k < ctrl_.pilot_draws; ++k) {
    z_->draw(eng, e);
    double mx = 0.0;
    for (const auto& x : e) mx = std::max(mx, x.value);
    maxima.push_back(mx);
  }
  const auto q = static_cast<std::size_t>(ctrl_.quantile_guard * static_cast<double>(maxima.size() - 1));
  std::nth_element(maxima.begin(), maxima.begin() + static_cast<std::ptrdiff_t>(q), maxima.end());
  bound_ = maxima[q];
  if (!(bound_ > 0.0)) bound_ = *std::max_element(maxima.begin(), maxima.end());
  if (!(bound_ > 0.0)) throw ModelError("pilot draws of the spectral field are all zero");
}

SeriesDiagnostic MaxStableSimulator::simulate(Engine& eng, std::vector<double>& x) const {
  const Window& w = window();
  x.assign(w.size(), 0.0);
  SeriesDiagnostic diag;
  const std::size_t refresh = std::max<std::size_t>(1, w.size() / 8);
  std::size_t since_refresh = 0;
  double lowest = 0.0;  // stale values never exceed the current minimum
  double gamma = 0.0;
  std::vector<Entry> e;
  for (;;) {
    gamma += standard_exponential(eng);
    const double scale = alpha_ == 1.0 ? 1.0 / gamma : std::pow(gamma, -1.0 / alpha_);
    const double reach = scale * bound_;
    if (reach < ctrl_.relative_floor * lowest) {
      diag.bound_triggered = true;
      break;
    }
    if (since_refresh >= refresh) {
      lowest = *std::min_element(x.begin(), x.end());
      since_refresh = 0;
      if (reach < ctrl_.relative_floor * lowest) {
        diag.bound_triggered = true;
        break;
      }
    }
    if (diag.terms >= ctrl_.max_terms) break;
    z_->draw(eng, e);
    ++diag.terms;
    ++since_refresh;
    for (const auto& v : e) {
      double& slot = x[w.index(v.at)];
      slot = std::max(slot, scale * v.value);
    }
  }
  return diag;
}

FieldSample MaxStableSimulator::simulate(Engine& eng, SeriesDiagnostic* diag) const {
  std::vector<double> x;
  const auto d = simulate(eng, x);
  if (diag) *diag = d;
  return FieldSample(window(), std::move(x), FieldTag::X);
}

SimulationResult simulate_maxstable(const ModelSpec& m, const Window& w, const SeriesControl& ctrl, Engine& eng,
                                    const SpectralOptions& opt) {
  MaxStableSimulator sim(m, w, ctrl, opt);
  SimulationResult r;
  r.field = sim.simulate(eng, &r.diagnostic);
  return r;
}

FieldSample sample_mixture_X(double p, const MaxStableSimulator& first, const MaxStableSimulator& second,
                             Engine& eng) {
  if (!(p > 0.0 && p < 1.0)) throw UsageError("mixture weight p must lie in (0,1)");
  if (!(first.window() == second.window())) throw UsageError("mixture components use different windows");
  const double a = first.alpha();
  std::vector<double> x1, x2;
  first.simulate(eng, x1);
  second.simulate(eng, x2);
  const double c1 = std::pow(p, 1.0 / a), c2 = std::pow(1.0 - p, 1.0 / a);
  for (std::size_t k = 0; k < x1.size(); ++k) x1[k] = std::max(c1 * x1[k], c2 * x2[k]);
  return FieldSample(first.window(), std::move(x1), FieldTag::X);
}

FieldSample sample_mixture_X(double p, const ModelSpec& m1, const ModelSpec& m2, const Window& w,
                             const SeriesControl& ctrl, Engine& eng) {
  validate_model(ModelSpec{Mixture{p, std::make_shared<const ModelSpec>(m1), std::make_shared<const ModelSpec>(m2)}});
  MaxStableSimulator s1(m1, w, ctrl), s2(m2, w, ctrl);
  return sample_mixture_X(p, s1, s2, eng);
}

namespace {

void check_fidi_args(std::span<const LatticePoint> points, std::span<const double> thresholds) {
  if (points.empty()) throw UsageError("fidi needs at least one point");
  if (points.size() != thresholds.size()) throw UsageError("points and thresholds differ in length");
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_same_dim(points[i], points[0]);
    if (!(thresholds[i] > 0.0)) throw UsageError("thresholds must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      if (points[i] == points[j]) throw UsageError("fidi points must be distinct: " + points[i].to_string());
    }
  }
}

double power(double v, double alpha) { return alpha == 1.0 ? v : std::pow(v, alpha); }

// Slot of each window point in the point list, -1 elsewhere.
std::vector<int> point_slots(const Window& w, std::span<const LatticePoint> points) {
  std::vector<int> slot(w.size(), -1);
  for (std::size_t i = 0; i < points.size(); ++i) slot[w.index(points[i])] = static_cast<int>(i);
  return slot;
}

}  // namespace

EstimateReport fidi_neglog(const ModelSpec& m, std::span<const LatticePoint> points,
                           std::span<const double> thresholds, std::size_t replicates, const RngStream& rng,
                           const SpectralOptions& opt) {
  check_fidi_args(points, thresholds);
  const Window w = Window::bounding(points);
  const auto z = make_z_sampler(m, w, opt);
  const double alpha = model_alpha(m);
  const auto slot = point_slots(w, points);
  const std::vector<double> x(thresholds.begin(), thresholds.end());

  const Moments acc = run_chunked(replicates, rng, Moments{}, [&](Engine& eng, std::size_t n, Moments& out) {
    std::vector<Entry> e;
    for (std::size_t r = 0; r < n; ++r) {
      z->draw(eng, e);
      double v = 0.0;
      for (const auto& q : e) {
        const int s = slot[w.index(q.at)];
        if (s >= 0) v = std::max(v, q.value / x[static_cast<std::size_t>(s)]);
      }
      out.add(power(v, alpha));
    }
  });
  return EstimateReport::from_moments("fidi_neglog", acc, w);
}

EstimateReport fidi_neglog_anchored(const ModelSpec& m, std::span<const LatticePoint> points,
                                    std::span<const double> thresholds, std::size_t replicates,
                                    const RngStream& rng) {
  check_fidi_args(points, thresholds);
  const Window w = Window::bounding(points);
  const Window host = w.difference(w);
  const auto theta = make_theta_sampler(m, host);
  const double alpha = model_alpha(m);

  // Points in lexicographic order so "first" is index order.
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lex_less(points[a], points[b]); });
  std::vector<LatticePoint> pts;
  std::vector<double> inv;  // x^{-alpha}, 0 for infinite thresholds
  for (auto i : order) {
    pts.push_back(points[i]);
    inv.push_back(std::isinf(thresholds[i]) ? 0.0 : 1.0 / power(thresholds[i], alpha));
  }
  const std::size_t k = pts.size();
  std::vector<std::size_t> offset_index(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) offset_index[i * k + j] = host.index(pts[j] - pts[i]);
  }

  const Moments acc = run_chunked(replicates, rng, Moments{}, [&](Engine& eng, std::size_t n, Moments& out) {
    std::vector<Entry> e;
    std::vector<double> dense(host.size(), 0.0);
    std::vector<double> g(k);
    for (std::size_t r = 0; r < n; ++r) {
      theta->draw(eng, e);
      for (const auto& q : e) dense[host.index(q.at)] = q.value;
      double v = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        if (inv[i] == 0.0) continue;
        for (std::size_t j = 0; j < k; ++j) g[j] = power(dense[offset_index[i * k + j]], alpha) * inv[j];
        bool first = true;
        for (std::size_t j = 0; j < k && first; ++j) {
          if (j < i) first = g[j] < g[i];
          if (j > i) first = g[j] <= g[i];
        }
        if (first) v += inv[i];
      }
      for (const auto& q : e) dense[host.index(q.at)] = 0.0;
      out.add(v);
    }
  });
  return EstimateReport::from_moments("fidi_neglog_anchored", acc, w);
}

EstimateReport y_fidi_cdf(const ModelSpec& m, const LatticePoint& h, std::span<const LatticePoint> points,
                          std::span<const double> thresholds, std::size_t replicates, const RngStream& rng,
                          TiltSource source, const SpectralOptions& opt) {
  check_fidi_args(points, thresholds);
  require_same_dim(h, points[0]);
  const double alpha = model_alpha(m);
  const std::vector<double> x(thresholds.begin(), thresholds.end());
  auto g = [&](double mx) {
    const double ma = power(mx, alpha);
    return std::max(1.0, ma) - ma;
  };

  Moments acc;
  Window w;
  if (source == TiltSource::shift) {
    std::vector<LatticePoint> rel;
    for (const auto& p : points) rel.push_back(p - h);
    rel.push_back(LatticePoint::origin(h.dim()));
    const Window host = Window::bounding(rel);
    rel.pop_back();
    const auto theta = make_theta_sampler(m, host);
    const auto slot = point_slots(host, rel);
    w = Window::bounding(points);
    acc = run_chunked(replicates, rng, Moments{}, [&](Engine& eng, std::size_t n, Moments& out) {
      std::vector<Entry> e;
      for (std::size_t r = 0; r < n; ++r) {
        theta->draw(eng, e);
        double mx = 0.0;
        for (const auto& q : e) {
          const int s = slot[host.index(q.at)];
          if (s >= 0) mx = std::max(mx, q.value / x[static_cast<std::size_t>(s)]);
        }
        out.add(g(mx));
      }
    });
  } else {
    std::vector<LatticePoint> all(points.begin(), points.end());
    all.push_back(h);
    w = Window::bounding(all);
    all.pop_back();
    const auto z = make_z_sampler(m, w, opt);
    const auto slot = point_slots(w, all);
    const std::size_t hi = w.index(h);
    acc = run_chunked(replicates, rng, Moments{}, [&](Engine& eng, std::size_t n, Moments& out) {
      std::vector<Entry> e;
      for (std::size_t r = 0; r < n; ++r) {
        z->draw(eng, e);
        double zh = 0.0;
        for (const auto& q : e) {
          if (w.index(q.at) == hi) zh = q.value;
        }
        if (!(zh > 0.0)) {
          out.add(0.0);
          continue;
        }
        double mx = 0.0;
        for (const auto& q : e) {
          const int s = slot[w.index(q.at)];
          if (s >= 0) mx = std::max(mx, q.value / zh / x[static_cast<std::size_t>(s)]);
        }
        out.add(power(zh, alpha) * g(mx));
      }
    });
  }
  auto rep = EstimateReport::from_moments("y_fidi_cdf", acc, w);
  rep.diagnostics["tilt_weighted"] = source == TiltSource::tilt ? 1.0 : 0.0;
  return rep;
}

}  // namespace maxstable
