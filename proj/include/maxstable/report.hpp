#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "maxstable/lattice.hpp"

namespace maxstable {

/// Streaming mean/variance (Welford), mergeable in a fixed order (Chan et al.).
class Moments {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  void merge(const Moments& o);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  // Sample variance (n - 1 denominator); 0 for fewer than two values.
  double variance() const;
  double stderr_of_mean() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// A fixed number of independent Moments accumulators, merged slot by slot.
class MomentsVec {
 public:
  explicit MomentsVec(std::size_t k = 0) : slots_(k) {}
  Moments& operator[](std::size_t i) { return slots_[i]; }
  const Moments& operator[](std::size_t i) const { return slots_[i]; }
  std::size_t size() const { return slots_.size(); }
  void merge(const MomentsVec& o);

 private:
  std::vector<Moments> slots_;
};

struct EstimateReport {
  std::string method;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t replicates = 0;
  Window window;
  std::map<std::string, double> diagnostics;
  std::vector<std::string> warnings;

  static EstimateReport from_moments(std::string method, const Moments& m, Window window);
};

// sqrt(s1^2 + s2^2)
double combined_stderr(const EstimateReport& a, const EstimateReport& b);

// |a - b| <= k * combined stderr (exact equality passes when both stderrs vanish).
bool agree_within(const EstimateReport& a, const EstimateReport& b, double k);

// Range check for extremal-index estimates: hard failure outside
// [-3 stderr, 1 + 3 stderr]. Appends a warning to the report on failure.
bool validate_theta_range(EstimateReport& r);

}  // namespace maxstable
