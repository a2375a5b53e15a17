#include "maxstable/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maxstable {

void Moments::merge(const Moments& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n_), nb = static_cast<double>(o.n_);
  const double n = na + nb;
  const double d = o.mean_ - mean_;
  mean_ += d * nb / n;
  m2_ += o.m2_ + d * d * na * nb / n;
  n_ += o.n_;
}

double Moments::variance() const {
  return n_ < 2 ? 0.0 : std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

double Moments::stderr_of_mean() const {
  return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

void MomentsVec::merge(const MomentsVec& o) {
  for (std::size_t i = 0; i < slots_.size(); ++i) slots_[i].merge(o.slots_[i]);
}

EstimateReport EstimateReport::from_moments(std::string method, const Moments& m, Window window) {
  EstimateReport r;
  r.method = std::move(method);
  r.estimate = m.mean();
  r.std_error = m.stderr_of_mean();
  r.replicates = m.count();
  r.window = std::move(window);
  return r;
}

double combined_stderr(const EstimateReport& a, const EstimateReport& b) {
  return std::hypot(a.std_error, b.std_error);
}

bool agree_within(const EstimateReport& a, const EstimateReport& b, double k) {
  return std::abs(a.estimate - b.estimate) <= k * combined_stderr(a, b);
}

bool validate_theta_range(EstimateReport& r) {
  const double slack = 3.0 * r.std_error;
  const bool ok = std::isfinite(r.estimate) && r.estimate >= -slack && r.estimate <= 1.0 + slack;
  if (!ok) {
    std::ostringstream os;
    os << "estimate " << r.estimate << " outside [0,1] beyond 3 stderr";
    r.warnings.push_back(os.str());
  }
  return ok;
}

}  // namespace maxstable
