#pragma once

// Two-sided Monte Carlo checks of the structural identities satisfied by
// spectral fields, spectral tail fields and tail fields.

#include <span>
#include <string>
#include <vector>

#include "maxstable/dehaan.hpp"
#include "maxstable/lattice.hpp"
#include "maxstable/model.hpp"
#include "maxstable/report.hpp"
#include "maxstable/rng.hpp"
#include "maxstable/samplers.hpp"

namespace maxstable {

/// Bounded 0-homogeneous test functionals. Points outside a sample's window read as 0.
struct TestFunctional {
  enum class Kind {
    coordinate_ratio,  // f(a) / (f(a) + f(b)), 0/0 := 0
    anchor_indicator,  // 1(first maximiser of f over `frame` is j)
    exceed_indicator,  // 1(f(a) > c f(0))
  };
  Kind kind = Kind::coordinate_ratio;
  LatticePoint a;
  LatticePoint b;
  Window frame;
  double c = 1.0;

  static TestFunctional coordinate_ratio(LatticePoint a, LatticePoint b);
  static TestFunctional anchor_indicator(LatticePoint j, Window frame);
  static TestFunctional exceed_indicator(LatticePoint a, double c);

  double operator()(const FieldSample& f) const { return shifted(f, LatticePoint::origin(f.window().dim())); }
  // F(B^h f), where (B^h f)(t) = f(t - h).
  double shifted(const FieldSample& f, const LatticePoint& h) const;
  // Points read by the functional.
  Window reach() const;
  int dim() const { return a.dim(); }
  std::string describe() const;
};

struct IdentityReport {
  std::string name;
  EstimateReport lhs;
  EstimateReport rhs;
  double z_score = 0.0;
  double allowance = 0.0;  // added to the 4-stderr band (conditioning bias)
  bool pass = false;
  bool inconclusive = false;
};

// pass iff |lhs - rhs| <= 4 sqrt(s1^2 + s2^2) + allowance (plus rounding slack).
IdentityReport make_identity_report(std::string name, EstimateReport lhs, EstimateReport rhs,
                                    double allowance = 0.0);

// E[Z(h)^alpha F(Z)] = E[Z(0)^alpha F(B^h Z)]; both sides from the same draws.
IdentityReport check_tsf_Z(const ZSampler& z, double alpha, const LatticePoint& h, const TestFunctional& f,
                           std::size_t replicates, const RngStream& rng);
IdentityReport check_tsf_Z(const ModelSpec& m, const LatticePoint& h, const TestFunctional& f,
                           std::size_t replicates, const RngStream& rng, const SpectralOptions& opt = {});

// E[Theta(h)^alpha F(Theta)] = E[F(B^h Theta) 1(Theta(-h) != 0)].
IdentityReport check_tsf_theta(const ThetaSampler& s, double alpha, const LatticePoint& h, const TestFunctional& f,
                               std::size_t replicates, const RngStream& rng);
IdentityReport check_tsf_theta(const ModelSpec& m, const LatticePoint& h, const TestFunctional& f,
                               std::size_t replicates, const RngStream& rng);

// E[F(tY) 1(Y(i) > 1/t)] = t^alpha E[F(B^i Y) 1(Y(-i) > t)].
IdentityReport check_tilt_identity(const ThetaSampler& s, double alpha, const LatticePoint& i, double t,
                                   const TestFunctional& f, std::size_t replicates, const RngStream& rng);
IdentityReport check_tilt_identity(const ModelSpec& m, const LatticePoint& i, double t, const TestFunctional& f,
                                   std::size_t replicates, const RngStream& rng);

struct YFidiOptions {
  double level = 50.0;          // conditioning level u
  double bias_allowance = 0.02;
  std::size_t min_events = 500;
  SeriesControl series;
};

// Conditional CDF of X / u given X(h) > u from simulated X against y_fidi_cdf.
IdentityReport check_y_fidi(const ModelSpec& m, const LatticePoint& h, std::span<const LatticePoint> points,
                            std::span<const double> thresholds, std::size_t replicates, const RngStream& rng,
                            const YFidiOptions& opt = {});

enum class IdentityKind { tsf_Z, tsf_theta, tilt };

const char* to_string(IdentityKind k);

// `count` checks with random (F, h) pairs drawn from rng.child(0); check k uses rng.child(k + 1).
// Shifts and functional points lie in [-2, 2]^d.
std::vector<IdentityReport> identity_suite(IdentityKind kind, const ModelSpec& m, std::size_t count,
                                           std::size_t replicates, const RngStream& rng);
// Same suite on an arbitrary Theta sampler (tsf_theta and tilt only).
std::vector<IdentityReport> identity_suite(IdentityKind kind, const ThetaSampler& s, double alpha,
                                           std::size_t count, std::size_t replicates, const RngStream& rng);

}  // namespace maxstable
