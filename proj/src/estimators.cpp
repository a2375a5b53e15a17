#include "maxstable/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace maxstable {

namespace {

double power(double v, double alpha) { return alpha == 1.0 ? v : std::pow(v, alpha); }

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Slots: 0 value, 1 divergence indicator, 2 shell fraction, then estimator extras.
constexpr std::size_t kValue = 0, kDivergent = 1, kShell = 2, kExtra = 3;

template <class F>
MomentsVec theta_loop(const ThetaSampler& s, std::size_t replicates, const RngStream& rng, std::size_t slots,
                      F&& per_sample) {
  return run_chunked(replicates, rng, MomentsVec(slots), [&](Engine& eng, std::size_t n, MomentsVec& acc) {
    std::vector<Entry> e;
    for (std::size_t r = 0; r < n; ++r) {
      s.draw(eng, e);
      per_sample(eng, e, acc);
    }
  });
}

EstimateReport finish(const std::string& method, const MomentsVec& acc, const Window& w) {
  auto rep = EstimateReport::from_moments(method, acc[kValue], w);
  rep.diagnostics["divergence_rate"] = acc[kDivergent].mean();
  rep.diagnostics["boundary_mass"] = acc[kShell].mean();
  if (acc[kDivergent].mean() > 0.0) {
    rep.warnings.push_back("divergent samples (outer shell mass above threshold): rate " +
                           fmt(acc[kDivergent].mean()));
  }
  validate_theta_range(rep);
  return rep;
}

void require_origin(const Window& w) {
  if (!w.contains(LatticePoint::origin(w.dim()))) throw UsageError("window " + w.to_string() + " must contain the origin");
}

}  // namespace

EstimateReport theta_ratio(const ModelSpec& m, const Window& w, std::size_t replicates, const RngStream& rng,
                           const ThetaOptions& opt) {
  require_origin(w);
  const auto s = make_theta_sampler(m, w);
  const double alpha = model_alpha(m);
  const auto acc = theta_loop(*s, replicates, rng, 3, [&](Engine&, std::span<const Entry> e, MomentsVec& a) {
    const SumResult sum = sum_alpha(e, w, alpha, opt.tail_fraction);
    double mx = 0.0;
    for (const auto& q : e) mx = std::max(mx, power(q.value, alpha));
    a[kValue].add(mx / sum.value);
    a[kDivergent].add(sum.tail_flag ? 1.0 : 0.0);
    a[kShell].add(sum.shell_fraction);
  });
  return finish("ratio", acc, w);
}

EstimateReport theta_exceed(const ModelSpec& m, const Window& w, std::size_t replicates, const RngStream& rng,
                            const ThetaOptions& opt) {
  require_origin(w);
  const auto s = make_theta_sampler(m, w);
  const double alpha = model_alpha(m);
  const auto acc = theta_loop(*s, replicates, rng, 4, [&](Engine& eng, std::span<const Entry> e, MomentsVec& a) {
    const double r = pareto(eng, alpha);
    std::size_t count = 0;
    std::size_t shell = 0;
    for (const auto& q : e) {
      if (r * q.value > 1.0) {
        ++count;
        if (w.on_boundary(q.at)) ++shell;
      }
    }
    const double frac = static_cast<double>(shell) / static_cast<double>(count);
    a[kValue].add(1.0 / static_cast<double>(count));
    a[kDivergent].add(frac > opt.tail_fraction ? 1.0 : 0.0);
    a[kShell].add(frac);
    a[kExtra].add(static_cast<double>(count));
  });
  auto rep = finish("exceed", acc, w);
  rep.diagnostics["mean_exceed_count"] = acc[kExtra].mean();
  return rep;
}

EstimateReport theta_anchor(const ModelSpec& m, const Window& w, const AnchorMap& map, std::size_t replicates,
                            const RngStream& rng, const ThetaOptions& opt) {
  require_origin(w);
  const auto s = make_theta_sampler(m, w);
  const double alpha = model_alpha(m);
  const bool on_y = map.kind == AnchorMap::Kind::first_exceed || map.kind == AnchorMap::Kind::last_exceed;
  const auto acc = theta_loop(*s, replicates, rng, 4, [&](Engine& eng, std::span<const Entry> e, MomentsVec& a) {
    const SumResult sum = sum_alpha(e, w, alpha, opt.tail_fraction);
    AnchorResult res;
    if (on_y) {
      thread_local std::vector<Entry> y;
      const double r = pareto(eng, alpha);
      y.assign(e.begin(), e.end());
      for (auto& q : y) q.value *= r;
      res = apply_anchor(map, y, w);
    } else {
      res = apply_anchor(map, e, w);
    }
    a[kValue].add(res.at_origin() && !sum.tail_flag ? 1.0 : 0.0);
    a[kDivergent].add(sum.tail_flag ? 1.0 : 0.0);
    a[kShell].add(sum.shell_fraction);
    a[kExtra].add(res.on_boundary ? 1.0 : 0.0);
  });
  auto rep = finish(std::string("anchor_") + to_string(map.kind), acc, w);
  rep.diagnostics["anchor_boundary_rate"] = acc[kExtra].mean();
  return rep;
}

EstimateReport theta_difference(const ModelSpec& m, const Window& w, std::size_t replicates, const RngStream& rng,
                                const ThetaOptions& opt) {
  require_origin(w);
  const auto s = make_theta_sampler(m, w);
  const double alpha = model_alpha(m);
  const LatticePoint o = LatticePoint::origin(w.dim());
  const auto acc = theta_loop(*s, replicates, rng, 3, [&](Engine&, std::span<const Entry> e, MomentsVec& a) {
    const SumResult sum = sum_alpha(e, w, alpha, opt.tail_fraction);
    double after = 0.0;
    for (const auto& q : e) {
      if (order_less(opt.order, o, q.at)) after = std::max(after, power(q.value, alpha));
    }
    a[kValue].add(sum.tail_flag ? 0.0 : std::max(0.0, 1.0 - after));
    a[kDivergent].add(sum.tail_flag ? 1.0 : 0.0);
    a[kShell].add(sum.shell_fraction);
  });
  return finish("difference", acc, w);
}

EstimateReport theta_pickands(const ModelSpec& m, LatticePoint::Coord n, std::size_t replicates,
                              const RngStream& rng, const SpectralOptions& opt) {
  if (n < 1) throw UsageError("Pickands window side n must be at least 1");
  const int d = model_dim(m);
  const Window w = Window::cube(d, 0, n);
  const auto z = make_z_sampler(m, w, opt);
  const double alpha = model_alpha(m);
  const double scale = 1.0 / std::pow(static_cast<double>(n), d);
  const Moments acc = run_chunked(replicates, rng, Moments{}, [&](Engine& eng, std::size_t cnt, Moments& a) {
    std::vector<Entry> e;
    for (std::size_t r = 0; r < cnt; ++r) {
      z->draw(eng, e);
      double mx = 0.0;
      for (const auto& q : e) mx = std::max(mx, q.value);
      a.add(power(mx, alpha) * scale);
    }
  });
  auto rep = EstimateReport::from_moments("pickands", acc, w);
  rep.diagnostics["n"] = static_cast<double>(n);
  if (auto b = z->sup_bound()) rep.diagnostics["spectral_bound"] = *b;
  return rep;
}

std::vector<EstimateReport> theta_pickands_sweep(const ModelSpec& m, std::span<const LatticePoint::Coord> ns,
                                                 std::size_t replicates, const RngStream& rng,
                                                 const SpectralOptions& opt) {
  if (ns.empty()) throw UsageError("Pickands sweep needs at least one n");
  std::vector<EstimateReport> out;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    if (k > 0 && ns[k] <= ns[k - 1]) throw UsageError("Pickands sweep values must increase");
    out.push_back(theta_pickands(m, ns[k], replicates, rng.child(k), opt));
  }
  return out;
}

const char* to_string(BlockOptions::Mode m) {
  switch (m) {
    case BlockOptions::Mode::identity: return "identity";
    case BlockOptions::Mode::raw: return "raw";
    case BlockOptions::Mode::calibrated: return "calibrated";
  }
  return "?";
}

double block_formula(double m, double r_power_d, double u, double alpha) {
  const double ua = power(u, alpha);
  return -std::expm1(-m / ua) / (r_power_d * -std::expm1(-1.0 / ua));
}

namespace {

double block_slope(double m, double r_power_d, double u, double alpha) {
  const double ua = power(u, alpha);
  return std::exp(-m / ua) / ua / (r_power_d * -std::expm1(-1.0 / ua));
}

void check_block_args(int d, double n, LatticePoint::Coord r, double tau) {
  if (r < 1) throw UsageError("block side r must be at least 1");
  if (!(tau > 0.0)) throw UsageError("tau must be positive");
  if (std::pow(static_cast<double>(r), d) > n / 10.0) {
    throw UsageError("block too large: r^d = " + fmt(std::pow(static_cast<double>(r), d)) + " exceeds n/10 = " +
                     fmt(n / 10.0));
  }
}

// Report for a block estimate built from an estimate of E[max Z^alpha] on the block.
EstimateReport block_from_mean(const std::string& method, double mhat, double mse, std::size_t reps,
                               const Window& block, double n, LatticePoint::Coord r, double tau, double alpha,
                               const std::vector<double>& taus) {
  const double rd = std::pow(static_cast<double>(r), block.dim());
  EstimateReport rep;
  rep.method = method;
  rep.window = block;
  rep.replicates = reps;
  rep.estimate = block_formula(mhat, rd, n * tau, alpha);
  rep.std_error = block_slope(mhat, rd, n * tau, alpha) * mse;
  rep.diagnostics["mean_block_max"] = mhat;
  rep.diagnostics["mean_block_max_stderr"] = mse;
  rep.diagnostics["u"] = n * tau;
  for (double t : taus) rep.diagnostics["tau_" + fmt(t)] = block_formula(mhat, rd, n * t, alpha);
  validate_theta_range(rep);
  return rep;
}

}  // namespace

EstimateReport theta_block(const ModelSpec& m, double n, LatticePoint::Coord r, double tau, std::size_t replicates,
                           const RngStream& rng, const BlockOptions& opt) {
  const int d = model_dim(m);
  check_block_args(d, n, r, tau);
  const Window block = Window::cube(d, 0, r);
  const double alpha = model_alpha(m);
  if (opt.mode != BlockOptions::Mode::identity) {
    auto sim = std::make_shared<MaxStableSimulator>(m, block, opt.series, opt.spectral, rng.child(2));
    BlockField field{block, alpha, [sim](Engine& eng, std::vector<double>& x) {
                       return sim->simulate(eng, x).bound_triggered;
                     }};
    auto rep = theta_block(field, n, r, tau, replicates, rng, opt.mode);
    for (double t : opt.tau_sweep) {
      if (opt.mode == BlockOptions::Mode::calibrated) {
        rep.diagnostics["tau_" + fmt(t)] =
            block_formula(rep.diagnostics["mean_block_max"], std::pow(static_cast<double>(r), d), n * t, alpha);
      }
    }
    return rep;
  }
  const auto z = make_z_sampler(m, block, opt.spectral);
  const Moments acc = run_chunked(replicates, rng, Moments{}, [&](Engine& eng, std::size_t cnt, Moments& a) {
    std::vector<Entry> e;
    for (std::size_t k = 0; k < cnt; ++k) {
      z->draw(eng, e);
      double mx = 0.0;
      for (const auto& q : e) mx = std::max(mx, q.value);
      a.add(power(mx, alpha));
    }
  });
  return block_from_mean("block", acc.mean(), acc.stderr_of_mean(), acc.count(), block, n, r, tau, alpha,
                         opt.tau_sweep);
}

EstimateReport theta_block(const BlockField& field, double n, LatticePoint::Coord r, double tau,
                           std::size_t replicates, const RngStream& rng, BlockOptions::Mode mode) {
  const int d = field.window.dim();
  check_block_args(d, n, r, tau);
  const double alpha = field.alpha;
  const double rd = std::pow(static_cast<double>(r), d);
  if (mode == BlockOptions::Mode::identity) throw UsageError("identity mode needs a model, not a simulated field");

  auto maxima = [&](std::size_t count, const RngStream& s, double level, MomentsVec& out) {
    out = run_chunked(count, s, MomentsVec(2), [&](Engine& eng, std::size_t cnt, MomentsVec& a) {
      std::vector<double> x;
      for (std::size_t k = 0; k < cnt; ++k) {
        const bool exact = field.simulate(eng, x);
        const double mx = *std::max_element(x.begin(), x.end());
        a[0].add(mx > level ? 1.0 : 0.0);
        a[1].add(exact ? 1.0 : 0.0);
      }
    });
  };

  if (mode == BlockOptions::Mode::raw) {
    const double u = n * tau;
    MomentsVec acc;
    maxima(replicates, rng, u, acc);
    const double p0 = -std::expm1(-1.0 / power(u, alpha));
    EstimateReport rep;
    rep.method = "block_raw";
    rep.window = field.window;
    rep.replicates = acc[0].count();
    rep.estimate = acc[0].mean() / (rd * p0);
    rep.std_error = acc[0].stderr_of_mean() / (rd * p0);
    rep.diagnostics["u"] = u;
    rep.diagnostics["exceedances"] = acc[0].mean() * static_cast<double>(acc[0].count());
    rep.diagnostics["bound_triggered_rate"] = acc[1].mean();
    validate_theta_range(rep);
    return rep;
  }

  // Pilot level with P(max X <= v) near 0.2.
  const std::size_t pilot_n = std::clamp<std::size_t>(replicates / 10, 500, 5000);
  std::vector<double> pilot;
  {
    Engine eng = rng.child(1).engine();
    std::vector<double> x;
    for (std::size_t k = 0; k < pilot_n; ++k) {
      field.simulate(eng, x);
      pilot.push_back(*std::max_element(x.begin(), x.end()));
    }
  }
  const auto q = static_cast<std::size_t>(0.2 * static_cast<double>(pilot_n));
  std::nth_element(pilot.begin(), pilot.begin() + static_cast<std::ptrdiff_t>(q), pilot.end());
  const double v = pilot[q];

  MomentsVec acc;
  maxima(replicates, rng.child(0), v, acc);
  const double f = 1.0 - acc[0].mean();  // P(max <= v)
  if (!(f > 0.0 && f < 1.0)) throw ModelError("calibration level " + fmt(v) + " gives a degenerate block-max frequency");
  const double va = power(v, alpha);
  const double mhat = -va * std::log(f);
  const double mse = va * std::sqrt(f * (1.0 - f) / static_cast<double>(acc[0].count())) / f;
  auto rep = block_from_mean("block_calibrated", mhat, mse, acc[0].count(), field.window, n, r, tau, alpha, {});
  rep.diagnostics["calibration_level"] = v;
  rep.diagnostics["calibration_cdf"] = f;
  rep.diagnostics["bound_triggered_rate"] = acc[1].mean();
  return rep;
}

EstimateReport theta_block_mixture(double p, const ModelSpec& m1, const ModelSpec& m2, double n,
                                   LatticePoint::Coord r, double tau, std::size_t replicates, const RngStream& rng,
                                   const BlockOptions& opt) {
  const int d = model_dim(m1);
  const Window block = Window::cube(d, 0, r);
  auto s1 = std::make_shared<MaxStableSimulator>(m1, block, opt.series, opt.spectral, rng.child(2));
  auto s2 = std::make_shared<MaxStableSimulator>(m2, block, opt.series, opt.spectral, rng.child(3));
  validate_model(ModelSpec{Mixture{p, std::make_shared<const ModelSpec>(m1), std::make_shared<const ModelSpec>(m2)}});
  const double c1 = std::pow(p, 1.0 / s1->alpha()), c2 = std::pow(1.0 - p, 1.0 / s1->alpha());
  BlockField field{block, s1->alpha(), [s1, s2, c1, c2](Engine& eng, std::vector<double>& x) {
                     thread_local std::vector<double> y;
                     const bool a = s1->simulate(eng, x).bound_triggered;
                     const bool b = s2->simulate(eng, y).bound_triggered;
                     for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::max(c1 * x[k], c2 * y[k]);
                     return a && b;
                   }};
  auto rep = theta_block(field, n, r, tau, replicates, rng, opt.mode);
  rep.method = "mixture_" + rep.method;
  return rep;
}

LowerBound br_lower_bound(const Variogram& v, const Window& support) {
  require_origin(support);
  if (v.dim() != support.dim()) throw UsageError("variogram and support differ in dimension");
  auto term = [](double gamma) { return std::erfc(std::sqrt(gamma) / (2.0 * std::sqrt(2.0))); };

  // Neumaier summation
  double sum = 0.0, comp = 0.0;
  auto add = [&](double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  };
  for (std::size_t k = 0; k < support.size(); ++k) add(term(v(support.point(k))));

  LowerBound out;
  out.support_sum = sum + comp;
  if (v.kind() == Variogram::Kind::table) {
    out.value = 1.0 / out.support_sum;
    return out;
  }
  out.tail_known = true;
  // Points outside the support have sup-norm above R; gamma(t) >= s |t|_inf^a there.
  LatticePoint::Coord radius = support.upper()[0];
  for (int j = 0; j < support.dim(); ++j) radius = std::min({radius, -support.lower()[j], support.upper()[j]});
  const int d = support.dim();
  double tail = 0.0;
  constexpr LatticePoint::Coord kMaxShells = 100'000'000;
  bool resolved = false;
  for (LatticePoint::Coord k = radius + 1; k <= radius + kMaxShells; ++k) {
    const double kk = static_cast<double>(k);
    const double count = std::pow(2.0 * kk + 1.0, d) - std::pow(2.0 * kk - 1.0, d);
    const double t = count * term(v.scale() * std::pow(kk, v.exponent()));
    tail += t;
    if (t < 1e-20 * (out.support_sum + tail)) {
      resolved = true;
      break;
    }
  }
  if (!resolved) {
    out.divergent = true;
    out.tail_bound = std::numeric_limits<double>::infinity();
    out.value = 0.0;
    return out;
  }
  out.tail_bound = tail;
  out.value = 1.0 / (out.support_sum + tail);
  return out;
}

std::vector<EstimateReport> anti_clustering_probe(const ModelSpec& m, std::span<const LatticePoint::Coord> ms,
                                                  const Window& w, std::size_t replicates, const RngStream& rng) {
  require_origin(w);
  if (ms.empty()) throw UsageError("probe needs at least one m");
  LatticePoint::Coord radius = w.upper()[0];
  for (int j = 0; j < w.dim(); ++j) radius = std::min({radius, -w.lower()[j], w.upper()[j]});
  for (std::size_t k = 0; k < ms.size(); ++k) {
    if (ms[k] < 0 || (k > 0 && ms[k] <= ms[k - 1])) throw UsageError("probe m values must be non-negative and increasing");
    if (ms[k] >= radius) throw UsageError("probe m = " + std::to_string(ms[k]) + " reaches the window radius " +
                                          std::to_string(radius));
  }
  const auto s = make_theta_sampler(m, w);
  const double alpha = model_alpha(m);
  const auto acc = theta_loop(*s, replicates, rng, ms.size(), [&](Engine&, std::span<const Entry> e, MomentsVec& a) {
    for (std::size_t k = 0; k < ms.size(); ++k) {
      double mx = 0.0;
      for (const auto& q : e) {
        if (q.at.sup_norm() > ms[k]) mx = std::max(mx, power(q.value, alpha));
      }
      a[k].add(std::max(0.0, 1.0 - mx));
    }
  });
  std::vector<EstimateReport> out;
  for (std::size_t k = 0; k < ms.size(); ++k) {
    auto rep = EstimateReport::from_moments("probe", acc[k], w);
    rep.diagnostics["m"] = static_cast<double>(ms[k]);
    out.push_back(std::move(rep));
  }
  return out;
}

EstimateReport theta_mixture(double p, const EstimateReport& first, const EstimateReport& second) {
  if (!(p > 0.0 && p < 1.0)) throw UsageError("mixture weight p must lie in (0,1)");
  EstimateReport rep;
  rep.method = "mixture";
  rep.estimate = p * first.estimate + (1.0 - p) * second.estimate;
  rep.std_error = std::hypot(p * first.std_error, (1.0 - p) * second.std_error);
  rep.replicates = std::min(first.replicates, second.replicates);
  rep.window = first.window;
  rep.diagnostics["p"] = p;
  validate_theta_range(rep);
  return rep;
}

}  // namespace maxstable
