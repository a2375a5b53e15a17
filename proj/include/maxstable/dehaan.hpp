#pragma once

// Max-stable fields through the de Haan series X(t) = max_i Gamma_i^{-1/alpha} Z_i(t)
// and finite-dimensional distributions through spectral expectations.

#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "maxstable/lattice.hpp"
#include "maxstable/model.hpp"
#include "maxstable/report.hpp"
#include "maxstable/rng.hpp"
#include "maxstable/samplers.hpp"

namespace maxstable {

struct SeriesControl {
  std::size_t max_terms = 1'000'000;
  double quantile_guard = 0.9999;
  double relative_floor = 1.0;
  // Draws used to estimate the quantile of max Z when no exact bound is known.
  std::size_t pilot_draws = 20'000;

  void validate() const;
};

struct SeriesDiagnostic {
  std::size_t terms = 0;
  bool bound_triggered = false;  // false: max_terms was reached first
};

class MaxStableSimulator {
 public:
  MaxStableSimulator(const ModelSpec& m, Window w, SeriesControl ctrl = {}, const SpectralOptions& opt = {},
                     const RngStream& pilot = RngStream(0x5eed));

  const Window& window() const { return z_->window(); }
  double alpha() const { return alpha_; }
  // Bound used by the stopping rule and whether it holds almost surely.
  double bound() const { return bound_; }
  bool bound_exact() const { return bound_exact_; }

  // Dense values on the window (row-major).
  SeriesDiagnostic simulate(Engine& eng, std::vector<double>& x) const;
  FieldSample simulate(Engine& eng, SeriesDiagnostic* diag = nullptr) const;

 private:
  std::unique_ptr<ZSampler> z_;
  SeriesControl ctrl_;
  double alpha_ = 1.0;
  double bound_ = 0.0;
  bool bound_exact_ = false;
};

struct SimulationResult {
  FieldSample field;
  SeriesDiagnostic diagnostic;
};

SimulationResult simulate_maxstable(const ModelSpec& m, const Window& w, const SeriesControl& ctrl, Engine& eng,
                                    const SpectralOptions& opt = {});

// X = max(p^{1/alpha} X_1, (1-p)^{1/alpha} X_2) from independent simulations.
FieldSample sample_mixture_X(double p, const MaxStableSimulator& first, const MaxStableSimulator& second,
                             Engine& eng);
FieldSample sample_mixture_X(double p, const ModelSpec& m1, const ModelSpec& m2, const Window& w,
                             const SeriesControl& ctrl, Engine& eng);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// E[max_i Z(t_i)^alpha / x_i^alpha] = -ln P(X(t_i) <= x_i for all i). Thresholds may be +inf.
EstimateReport fidi_neglog(const ModelSpec& m, std::span<const LatticePoint> points,
                           std::span<const double> thresholds, std::size_t replicates, const RngStream& rng,
                           const SpectralOptions& opt = {});

// sum_i x_i^{-alpha} P(t_i is the first maximiser of Theta(t_j - t_i)^alpha / x_j^alpha).
EstimateReport fidi_neglog_anchored(const ModelSpec& m, std::span<const LatticePoint> points,
                                    std::span<const double> thresholds, std::size_t replicates,
                                    const RngStream& rng);

enum class TiltSource {
  shift,  // Theta_h = B^h Theta
  tilt,   // Z / Z(h) weighted by Z(h)^alpha
};

// P(Y_h(t_i) <= x_i for all i) = E[max(1, M^alpha) - M^alpha], M = max_i Theta_h(t_i) / x_i.
EstimateReport y_fidi_cdf(const ModelSpec& m, const LatticePoint& h, std::span<const LatticePoint> points,
                          std::span<const double> thresholds, std::size_t replicates, const RngStream& rng,
                          TiltSource source = TiltSource::shift, const SpectralOptions& opt = {});

}  // namespace maxstable
