#pragma once

// Reference values computed without the library: closed forms, hand
// enumerations and deterministic quadrature in extended precision.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

inline long double Phi(long double x) { return 0.5L * std::erfc(-x / std::sqrt(2.0L)); }

// Composite Simpson on [-L, L] against the standard normal density.
inline long double gauss_expect(const std::function<long double(long double)>& f, long double L = 14.0L,
                                int panels = 40000) {
  const long double h = 2.0L * L / panels;
  const long double c = 1.0L / std::sqrt(2.0L * 3.141592653589793238462643383279L);
  long double acc = 0.0L;
  for (int k = 0; k <= panels; ++k) {
    const long double g = -L + h * k;
    const long double w = (k == 0 || k == panels) ? 1.0L : (k % 2 ? 4.0L : 2.0L);
    acc += w * f(g) * c * std::exp(-0.5L * g * g);
  }
  return acc * h / 3.0L;
}

// -ln P(X(0) <= x, X(1) <= y), Brown-Resnick with gamma(1) = g, alpha = 1:
// E max(1/x, exp(sqrt(g) G - g/2) / y) by quadrature over G.
inline long double br_pair_neglog_quadrature(long double x, long double y, long double g) {
  const long double s = std::sqrt(g);
  return gauss_expect([&](long double z) { return std::fmax(1.0L / x, std::exp(s * z - g / 2.0L) / y); });
}

// Husler-Reiss closed form of the same quantity.
inline long double husler_reiss_neglog(long double x, long double y, long double g) {
  const long double a = std::sqrt(g);
  return Phi(a / 2.0L + std::log(y / x) / a) / x + Phi(a / 2.0L + std::log(x / y) / a) / y;
}

// P(Y(t) <= y) where Y = R Theta, R unit Pareto, ln Theta(t) ~ N(-c^2/2, c^2).
inline long double y_marginal_cdf(long double y, long double c) {
  return Phi(std::log(y) / c + c / 2.0L) - Phi(std::log(y) / c - c / 2.0L) / y;
}

// Same probability as E[(1 - Theta(t)/y)_+] by quadrature.
inline long double y_marginal_cdf_quadrature(long double y, long double c) {
  return gauss_expect([&](long double z) { return std::fmax(0.0L, 1.0L - std::exp(c * z - c * c / 2.0L) / y); });
}

// Sequence model: max c^alpha / sum c^alpha.
inline double sequence_theta(const std::vector<double>& c, double alpha = 1.0) {
  double m = 0.0, s = 0.0;
  for (double v : c) {
    const double p = std::pow(v, alpha);
    m = std::fmax(m, p);
    s += p;
  }
  return m / s;
}

// Sum over t in [-R, R] of 2 Phibar(sqrt(s |t|) / 2), accumulated in quad precision.
inline long double br_bound_sum_1d(long double s, std::int64_t R) {
  __float128 acc = 0;
  for (std::int64_t t = -R; t <= R; ++t) {
    const long double sigma = std::sqrt(s * static_cast<long double>(t < 0 ? -t : t));
    acc += static_cast<__float128>(std::erfc(sigma / (2.0L * std::sqrt(2.0L))));
  }
  return static_cast<long double>(acc);
}

// Recorded value of 1 / sum_{t in Z} 2 Phibar(sqrt|t| / 2), support [-50, 50]
// plus the remainder summed out to |t| = 10^5, from br_bound_sum_1d.
inline constexpr double kBrBoundGoldenS1 = 0.12247380180553562;

// Independent field, n^{-d} E max over [0,n]^d of Z with Z = 1/p_N at a uniform N.
inline double independent_pickands(double n, int d) { return std::pow((n + 1.0) / n, d); }

// Block exceedance ratio for an independent Frechet field.
inline double independent_block(double n, double r, double tau, int d) {
  const double u = n * tau;
  const double blocks = std::pow(r + 1.0, d);
  return -std::expm1(-blocks / u) / (std::pow(r, d) * -std::expm1(-1.0 / u));
}

}  // namespace oracle
