#include <cmath>

#include "doctest.h"
#include "maxstable/functionals.hpp"
#include "maxstable/report.hpp"
#include "maxstable/spectral.hpp"
#include "maxstable/variogram.hpp"
#include "oracles.hpp"

using namespace maxstable;

namespace {

ModelRef br(double s = 1.0) { return brown_resnick(Variogram::power(1, s, 1.0)); }

bool within(const Moments& m, double target, double k = 3.0) {
  return std::abs(m.mean() - target) <= k * m.stderr_of_mean() + 1e-12;
}

}  // namespace

TEST_CASE("Brown-Resnick Theta") {
  const Window w = Window::cube(1, -5, 5);
  auto s = make_theta_sampler(*br(), w);
  Engine eng = RngStream(1).engine();
  std::vector<Moments> mean(w.size());
  Moments logmean, logsq;
  const int n = 100000;
  std::vector<double> logs;
  logs.reserve(n);
  for (int k = 0; k < n; ++k) {
    const auto f = sample_theta(*s, eng);
    REQUIRE(f.tag() == FieldTag::Theta);
    REQUIRE(f.at(LatticePoint{0}) == 1.0);
    for (std::size_t i = 0; i < w.size(); ++i) mean[i].add(f.values()[i]);
    logs.push_back(std::log(f.at(LatticePoint{1})));
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    INFO("t = " << w.point(i).to_string() << " mean " << mean[i].mean());
    CHECK(within(mean[i], 1.0));
  }
  for (double x : logs) logmean.add(x);
  CHECK(logmean.mean() == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(logmean.variance() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("sequence Theta atoms") {
  const auto m = sequence_model_1d({1.0, 1.0});
  const Window w = Window::cube(1, -3, 3);
  Engine eng = RngStream(2).engine();
  int right = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const auto f = sample_theta(*m, w, eng);
    REQUIRE(f.at(LatticePoint{0}) == 1.0);
    const bool r = f.at(LatticePoint{1}) == 1.0 && f.at(LatticePoint{-1}) == 0.0;
    const bool l = f.at(LatticePoint{-1}) == 1.0 && f.at(LatticePoint{1}) == 0.0;
    REQUIRE((r || l));
    right += r;
  }
  CHECK(std::abs(right / double(n) - 0.5) < 3.0 * 0.5 / std::sqrt(double(n)));
}

TEST_CASE("sequence S law matches c^alpha / C") {
  // c = (3,1): S = 0 with probability 3/4, then S(Theta) = 4/3; else 4.
  const auto m = sequence_model_1d({3.0, 1.0});
  const Window w = Window::cube(1, -3, 3);
  Engine eng = RngStream(3).engine();
  const int n = 100000;
  int first = 0;
  for (int k = 0; k < n; ++k) {
    const auto f = sample_theta(*m, w, eng);
    const double s = sum_alpha(f, 1.0).value;
    if (std::abs(s - 4.0 / 3.0) < 1e-12) {
      ++first;
    } else {
      REQUIRE(s == doctest::Approx(4.0));
    }
  }
  // chi-square with one degree of freedom, 99.9% point 10.83
  const double e0 = 0.75 * n, e1 = 0.25 * n;
  const double chi = (first - e0) * (first - e0) / e0 + (n - first - e1) * (n - first - e1) / e1;
  CHECK(chi < 10.83);
}

TEST_CASE("exact sequence theta") {
  auto seq = [](const ModelRef& m) { return std::get<SequenceModel>(m->family); };
  CHECK(exact_sequence_theta(seq(sequence_model_1d({1.0, 1.0}))) == doctest::Approx(0.5));
  CHECK(exact_sequence_theta(seq(sequence_model_1d({3.0, 1.0}))) == doctest::Approx(0.75));
  std::vector<double> geo;
  for (int t = -20; t <= 20; ++t) geo.push_back(std::pow(2.0, -std::abs(t)));
  CHECK(exact_sequence_theta(seq(sequence_model_1d(geo))) == doctest::Approx(oracle::sequence_theta(geo)));
  CHECK(exact_sequence_theta(seq(sequence_model_1d(geo))) == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
  CHECK(exact_sequence_theta(seq(sequence_model_1d({3.0, 1.0}, 2.0))) ==
        doctest::Approx(oracle::sequence_theta({3.0, 1.0}, 2.0)));
  CHECK_THROWS(sequence_model_1d({0.0, 0.0}));
}

TEST_CASE("independent, product and alternating Theta") {
  const auto f = sample_independent_theta(Window::cube(1, -4, 4));
  const auto e = to_sparse(f);
  REQUIRE(e.size() == 1);
  CHECK(e[0].at == LatticePoint{0});
  CHECK(sum_alpha(f, 1.0).value == 1.0);

  Engine eng = RngStream(4).engine();
  const auto p = product_model(independent_model(), independent_model());
  const auto pf = sample_theta(*p, Window::cube(2, -2, 2), eng);
  const auto pe = to_sparse(pf);
  REQUIRE(pe.size() == 1);
  CHECK(pe[0].at == LatticePoint{0, 0});

  const auto ps = product_model(sequence_model_1d({3.0, 1.0}), br());
  for (int k = 0; k < 100; ++k) CHECK(sample_theta(*ps, Window::cube(2, -3, 3), eng).at(LatticePoint{0, 0}) == 1.0);

  const auto a = sample_alternating_theta(Window::cube(1, -10, 10));
  CHECK(a.at(LatticePoint{0}) == 1.0);
  CHECK(a.at(LatticePoint{1}) == 0.0);
  CHECK(a.at(LatticePoint{2}) == 1.0);
  const auto s = sum_alpha(a, 1.0);
  CHECK(s.value == 11.0);
  CHECK(s.tail_flag);
}

TEST_CASE("spectral field from a degenerate tail") {
  const Window w = Window::cube(1, 0, 3);
  std::vector<std::pair<LatticePoint, double>> p;
  for (int t = -1; t <= 4; ++t) p.emplace_back(LatticePoint{t}, t == 0 ? 3.0 : 1.0);  // normalised to sum 8
  Engine eng = RngStream(5).engine();
  for (int k = 0; k < 200; ++k) {
    const auto z = construct_spectral_from_tail(*independent_model(), p, w, eng);
    const auto e = to_sparse(z);
    REQUIRE(e.size() <= 1);
    if (e.size() == 1) {
      const double pt = (e[0].at == LatticePoint{0} ? 3.0 : 1.0) / 8.0;
      CHECK(e[0].value == doctest::Approx(1.0 / pt));
    }
  }
}

TEST_CASE("E Z(t) = 1 for the tail construction") {
  const Window w = Window::cube(1, -3, 3);
  for (const auto& m : {br(), sequence_model_1d({3.0, 1.0}), independent_model()}) {
    auto z = make_z_sampler(*m, w);
    Engine eng = RngStream(6).engine();
    std::vector<Moments> mean(w.size());
    for (int k = 0; k < 100000; ++k) {
      const auto f = sample_z(*z, eng);
      for (std::size_t i = 0; i < w.size(); ++i) mean[i].add(f.values()[i]);
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      INFO(model_name(*m) << " t = " << w.point(i).to_string() << " mean " << mean[i].mean());
      CHECK(within(mean[i], 1.0));
    }
  }
}

TEST_CASE("tilted spectral field") {
  const Window w = Window::cube(1, -3, 3);
  const LatticePoint h{1};
  Engine eng = RngStream(7).engine();
  Moments weight;
  double num = 0.0, den = 0.0;
  for (int k = 0; k < 50000; ++k) {
    const auto f = tilt_spectral(*br(), h, w, eng);
    REQUIRE(f.weight().has_value());
    const double wt = *f.weight();
    weight.add(wt);
    if (wt > 0) {
      num += wt * f.at(h);
      den += wt;
    }
  }
  CHECK(num / den == doctest::Approx(1.0));
  CHECK(within(weight, 1.0));
  const auto draws = tilt_spectral_resample(*br(), h, w, 50, 2000, RngStream(8));
  CHECK(draws.size() == 50);
  for (const auto& d : draws) CHECK(d.at(h) == doctest::Approx(1.0));
}

TEST_CASE("Y = R Theta") {
  const Window w = Window::cube(1, -3, 3);
  Engine eng = RngStream(9).engine();
  const int n = 100000;
  Moments s2, s5, s10;
  std::vector<double> ys = {0.5, 1.0, 1.5, 2.0, 4.0};
  std::vector<Moments> cdf(ys.size());
  for (int k = 0; k < n; ++k) {
    const auto y = sample_Y(*br(), w, eng);
    REQUIRE(y.tag() == FieldTag::Y);
    const double y0 = y.at(LatticePoint{0});
    REQUIRE(y0 > 1.0);
    s2.add(y0 > 2.0);
    s5.add(y0 > 5.0);
    s10.add(y0 > 10.0);
    for (std::size_t i = 0; i < ys.size(); ++i) cdf[i].add(y.at(LatticePoint{2}) <= ys[i]);
  }
  CHECK(within(s2, 0.5));
  CHECK(within(s5, 0.2));
  CHECK(within(s10, 0.1));
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double c = std::sqrt(2.0);
    INFO("y = " << ys[i] << " empirical " << cdf[i].mean());
    CHECK(within(cdf[i], static_cast<double>(oracle::y_marginal_cdf(ys[i], c))));
  }
}

TEST_CASE("marginal closed form agrees with quadrature") {
  for (double c : {0.5, 1.0, 2.0}) {
    for (double y : {0.3, 1.0, 1.5, 3.0, 10.0}) {
      CHECK(static_cast<double>(oracle::y_marginal_cdf(y, c)) ==
            doctest::Approx(static_cast<double>(oracle::y_marginal_cdf_quadrature(y, c))).epsilon(1e-6));
    }
  }
}
