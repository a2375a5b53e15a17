#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "maxstable/lattice.hpp"

namespace maxstable {

/// Variogram gamma(h) = Var(W(t+h) - W(t)) of a Gaussian field with stationary
/// increments, evaluated on lattice offsets.
class Variogram {
 public:
  enum class Kind { power, table };

  // gamma(h) = scale * |h|^exponent with the Euclidean norm; exponent in (0, 2].
  static Variogram power(int dim, double scale, double exponent);
  // Explicit values; gamma(-h) is filled from gamma(h) when absent. gamma(0) = 0
  // is implied and any listed value at 0 must be 0.
  static Variogram table(std::vector<std::pair<LatticePoint, double>> values);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }
  const std::vector<std::pair<LatticePoint, double>>& entries() const { return table_; }

  // Throws ModelError for table offsets that are not listed.
  double operator()(const LatticePoint& h) const;
  bool defined_at(const LatticePoint& h) const;

 private:
  Kind kind_ = Kind::power;
  int dim_ = 1;
  double scale_ = 1.0;
  double exponent_ = 1.0;
  std::vector<std::pair<LatticePoint, double>> table_;  // sorted lexicographically
};

/// Reads "offset... gamma" rows (d integers then one real); '#' starts a comment.
Variogram read_variogram_table(std::istream& in);
Variogram load_variogram_table(const std::string& path);

}  // namespace maxstable
