#pragma once

// Extremal-index estimators. Every estimator draws from the stream it is given;
// callers hand distinct child streams to estimators that are compared.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "maxstable/dehaan.hpp"
#include "maxstable/functionals.hpp"
#include "maxstable/model.hpp"
#include "maxstable/report.hpp"
#include "maxstable/rng.hpp"
#include "maxstable/samplers.hpp"
#include "maxstable/variogram.hpp"

namespace maxstable {

struct ThetaOptions {
  // A sample is divergent when the window's outer shell carries more than this
  // share of S(Theta). Anchor and difference estimators count divergent samples
  // as 0; every estimator reports the divergence rate.
  double tail_fraction = kDefaultTailFraction;
  LatticeOrder order = LatticeOrder::lexicographic;
};

// E[max_t Theta^alpha(t) / S(Theta)]
EstimateReport theta_ratio(const ModelSpec& m, const Window& w, std::size_t replicates, const RngStream& rng,
                           const ThetaOptions& opt = {});
// E[1 / B(Y)]
EstimateReport theta_exceed(const ModelSpec& m, const Window& w, std::size_t replicates, const RngStream& rng,
                            const ThetaOptions& opt = {});
// P(I(Theta) = 0) for the max maps, P(I(Y) = 0) for the exceedance maps.
EstimateReport theta_anchor(const ModelSpec& m, const Window& w, const AnchorMap& map, std::size_t replicates,
                            const RngStream& rng, const ThetaOptions& opt = {});
// E[(1 - max_{t > 0} Theta^alpha(t))_+ ; S(Theta) < inf]
EstimateReport theta_difference(const ModelSpec& m, const Window& w, std::size_t replicates, const RngStream& rng,
                                const ThetaOptions& opt = {});

// n^{-d} E[max_{[0,n]^d} Z^alpha]
EstimateReport theta_pickands(const ModelSpec& m, LatticePoint::Coord n, std::size_t replicates,
                              const RngStream& rng, const SpectralOptions& opt = {});
// One report per n (stream child k for the k-th n); the last entry is the final value.
std::vector<EstimateReport> theta_pickands_sweep(const ModelSpec& m, std::span<const LatticePoint::Coord> ns,
                                                 std::size_t replicates, const RngStream& rng,
                                                 const SpectralOptions& opt = {});

struct BlockOptions {
  enum class Mode {
    identity,    // P(max > u) = 1 - exp(-E[max Z^alpha] / u^alpha), E[max Z^alpha] by Monte Carlo
    raw,         // empirical block exceedance frequency of simulated X
    calibrated,  // E[max Z^alpha] = -v^alpha ln P(max X <= v) at a pilot level v, from simulated X
  };
  Mode mode = Mode::identity;
  std::vector<double> tau_sweep{0.5, 1.0, 2.0};
  SpectralOptions spectral;
  SeriesControl series;
};

const char* to_string(BlockOptions::Mode m);

// Simulated field on a block window, for the raw and calibrated modes.
struct BlockField {
  Window window;
  double alpha = 1.0;
  // Fills the block values; returns false when the series stopped on its term budget.
  std::function<bool(Engine&, std::vector<double>&)> simulate;
};

// (1 - exp(-m / u^alpha)) / (r^d (1 - exp(-u^{-alpha}))) with u = n tau.
double block_formula(double m, double r_power_d, double u, double alpha);

EstimateReport theta_block(const ModelSpec& m, double n, LatticePoint::Coord r, double tau, std::size_t replicates,
                           const RngStream& rng, const BlockOptions& opt = {});
EstimateReport theta_block(const BlockField& field, double n, LatticePoint::Coord r, double tau,
                           std::size_t replicates, const RngStream& rng, BlockOptions::Mode mode);
// Block estimate on X = max(p^{1/alpha} X_1, (1-p)^{1/alpha} X_2), raw or calibrated mode.
EstimateReport theta_block_mixture(double p, const ModelSpec& m1, const ModelSpec& m2, double n,
                                   LatticePoint::Coord r, double tau, std::size_t replicates, const RngStream& rng,
                                   const BlockOptions& opt);

struct LowerBound {
  double value = 0.0;        // 1 / (support_sum + tail_bound); 0 when the sum diverges
  double support_sum = 0.0;  // sum over the support of 2 Phibar(sigma(t) / 2)
  double tail_bound = 0.0;   // upper bound on the omitted terms
  bool tail_known = false;   // false for table variograms: value then ignores the tail
  bool divergent = false;
};

LowerBound br_lower_bound(const Variogram& v, const Window& support);

// E[(1 - max_{m < |t|_inf, t in w} Theta^alpha(t))_+] for each m.
std::vector<EstimateReport> anti_clustering_probe(const ModelSpec& m, std::span<const LatticePoint::Coord> ms,
                                                  const Window& w, std::size_t replicates, const RngStream& rng);

// p theta_1 + (1 - p) theta_2 with propagated standard error.
EstimateReport theta_mixture(double p, const EstimateReport& first, const EstimateReport& second);

}  // namespace maxstable
