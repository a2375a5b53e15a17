#pragma once

// Declarative descriptions of the spectral model families.

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "maxstable/lattice.hpp"
#include "maxstable/variogram.hpp"

namespace maxstable {

struct ModelSpec;
using ModelRef = std::shared_ptr<const ModelSpec>;

/// Theta(t) = exp(W(t) - gamma(t)/2) with W a centred Gaussian field, W(0) = 0.
struct BrownResnick {
  Variogram variogram;
  double alpha = 1.0;  // Theta is exp(W - gamma/2)^{1/alpha}
};

/// Theta(i) = c_{i+S} / c_S with P(S = i) = c_i^alpha / C.
struct SequenceModel {
  std::vector<std::pair<LatticePoint, double>> coeffs;
  double alpha = 1.0;

  int dim() const;
  // C = sum_i c_i^alpha
  double total() const;
  // Throws ModelError unless alpha > 0, all c_i >= 0 and some c_i > 0.
  void validate() const;
};

/// Independent alpha-Frechet field: Theta vanishes off the origin.
struct Independent {
  int dim = 1;
  double alpha = 1.0;
};

/// d = 1 field with Theta = 1 on even points and 0 on odd points (extremal index 0).
struct Alternating {
  double alpha = 1.0;
};

/// Theta(t) = Theta_1(t_1) Theta_2(t_2), t = (t_1, t_2) in Z^k x Z^m.
struct Product {
  ModelRef first;
  ModelRef second;
};

/// X = max(p eta_1, (1 - p) eta_2) for independent eta_1, eta_2 (alpha = 1; in
/// general the weights p^{1/alpha}, (1-p)^{1/alpha} are used).
struct Mixture {
  double p = 0.5;
  ModelRef first;
  ModelRef second;
};

/// Spectral field built from the tail field of `tail` with explicit weights p_j
/// (finite support, normalised to sum 1).
struct FromTail {
  ModelRef tail;
  std::vector<std::pair<LatticePoint, double>> weights;
};

struct ModelSpec {
  std::variant<BrownResnick, SequenceModel, Independent, Alternating, Product, Mixture, FromTail>
      family;
};

ModelRef brown_resnick(Variogram v, double alpha = 1.0);
ModelRef sequence_model(std::vector<std::pair<LatticePoint, double>> coeffs, double alpha = 1.0);
// Convenience for d = 1: coefficient k sits at lattice point k.
ModelRef sequence_model_1d(const std::vector<double>& coeffs, double alpha = 1.0);
ModelRef independent_model(int dim = 1, double alpha = 1.0);
ModelRef alternating_model(double alpha = 1.0);
ModelRef product_model(ModelRef first, ModelRef second);
ModelRef mixture_model(double p, ModelRef first, ModelRef second);
ModelRef from_tail_model(ModelRef tail, std::vector<std::pair<LatticePoint, double>> weights);

int model_dim(const ModelSpec& m);
std::string model_name(const ModelSpec& m);
// Tail index shared by every component; ModelError when components disagree.
double model_alpha(const ModelSpec& m);
// Structural checks (weights, mixture p, product dimensions); throws ModelError.
void validate_model(const ModelSpec& m);

}  // namespace maxstable
