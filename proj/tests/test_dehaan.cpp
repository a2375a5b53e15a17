#include <cmath>

#include "doctest.h"
#include "maxstable/dehaan.hpp"
#include "maxstable/report.hpp"
#include "maxstable/variogram.hpp"
#include "oracles.hpp"

using namespace maxstable;

namespace {

ModelRef br() { return brown_resnick(Variogram::power(1, 1.0, 1.0)); }

bool close3(const EstimateReport& r, double target) {
  return std::abs(r.estimate - target) <= 3.0 * r.std_error + 1e-12;
}

bool close3(const Moments& m, double target) {
  return std::abs(m.mean() - target) <= 3.0 * m.stderr_of_mean() + 1e-12;
}

}  // namespace

TEST_CASE("series control validation") {
  SeriesControl c;
  CHECK_NOTHROW(c.validate());
  c.quantile_guard = 1.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.max_terms = 0;
  CHECK_THROWS(c.validate());
  c = {};
  c.relative_floor = 0.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("unit Frechet marginals") {
  const Window w = Window::cube(1, 0, 4);
  for (const auto& m : {br(), sequence_model_1d({3.0, 1.0}), independent_model(), alternating_model()}) {
    MaxStableSimulator sim(*m, w);
    Engine eng = RngStream(1).engine();
    std::vector<Moments> cdf(3);
    const double xs[] = {0.5, 1.0, 2.0};
    std::size_t budget = 0;
    for (int k = 0; k < 20000; ++k) {
      SeriesDiagnostic d;
      const auto x = sim.simulate(eng, &d);
      budget += !d.bound_triggered;
      for (int i = 0; i < 3; ++i) cdf[i].add(x.at(LatticePoint{2}) <= xs[i]);
    }
    CHECK(budget == 0);
    for (int i = 0; i < 3; ++i) {
      INFO(model_name(*m) << " x = " << xs[i] << " cdf " << cdf[i].mean());
      CHECK(close3(cdf[i], std::exp(-1.0 / xs[i])));
    }
  }
}

TEST_CASE("independent field has independent coordinates") {
  MaxStableSimulator sim(*independent_model(), Window::cube(1, 0, 1));
  Engine eng = RngStream(2).engine();
  Moments joint;
  for (int k = 0; k < 50000; ++k) {
    const auto x = sim.simulate(eng);
    joint.add(x.at(LatticePoint{0}) <= 1.0 && x.at(LatticePoint{1}) <= 2.0);
  }
  CHECK(close3(joint, std::exp(-1.0) * std::exp(-0.5)));
}

TEST_CASE("mixture marginals") {
  Engine eng = RngStream(3).engine();
  Moments cdf;
  for (int k = 0; k < 20000; ++k) {
    const auto x = sample_mixture_X(0.7, *sequence_model_1d({3.0, 1.0}), *alternating_model(), Window::cube(1, 0, 3),
                                    SeriesControl{}, eng);
    cdf.add(x.at(LatticePoint{1}) <= 1.0);
  }
  CHECK(close3(cdf, std::exp(-1.0)));
}

TEST_CASE("Husler-Reiss pair") {
  const std::vector<LatticePoint> pts{LatticePoint{0}, LatticePoint{1}};
  for (auto [x, y] : {std::pair{1.0, 1.0}, {1.0, 2.0}, {0.5, 3.0}}) {
    const std::vector<double> th{x, y};
    const auto r = fidi_neglog(*br(), pts, th, 200000, RngStream(4));
    const double q = static_cast<double>(oracle::br_pair_neglog_quadrature(x, y, 1.0));
    CHECK(q == doctest::Approx(static_cast<double>(oracle::husler_reiss_neglog(x, y, 1.0))).epsilon(1e-6));
    INFO("x=" << x << " y=" << y << " mc " << r.estimate << " quad " << q);
    CHECK(std::abs(r.estimate - q) / q < 0.01);
  }
}

TEST_CASE("simulated joint CDF matches the spectral formula") {
  const Window w = Window::cube(1, 0, 1);
  MaxStableSimulator sim(*br(), w);
  Engine eng = RngStream(5).engine();
  Moments joint;
  for (int k = 0; k < 50000; ++k) {
    const auto x = sim.simulate(eng);
    joint.add(x.at(LatticePoint{0}) <= 1.0 && x.at(LatticePoint{1}) <= 2.0);
  }
  const double target = std::exp(-static_cast<double>(oracle::husler_reiss_neglog(1.0, 2.0, 1.0)));
  CHECK(close3(joint, target));
}

TEST_CASE("fidi_neglog special cases") {
  const std::vector<LatticePoint> one{LatticePoint{3}};
  const std::vector<double> x2{2.0};
  CHECK(close3(fidi_neglog(*br(), one, x2, 50000, RngStream(6)), 0.5));
  const std::vector<LatticePoint> three{LatticePoint{0}, LatticePoint{3}, LatticePoint{5}};
  const std::vector<double> inf{kInfinity, 2.0, kInfinity};
  CHECK(close3(fidi_neglog(*br(), three, inf, 50000, RngStream(6)), 0.5));
  CHECK_THROWS_AS(fidi_neglog(*br(), std::vector<LatticePoint>{}, std::vector<double>{}, 10, RngStream(6)),
                  UsageError);
  // non-increasing in each threshold
  const std::vector<LatticePoint> pair{LatticePoint{0}, LatticePoint{2}};
  double prev = kInfinity;
  for (double y : {0.5, 1.0, 2.0, 4.0}) {
    const auto r = fidi_neglog(*br(), pair, std::vector<double>{1.0, y}, 20000, RngStream(7));
    CHECK(r.estimate <= prev + 1e-12);
    prev = r.estimate;
  }
}

TEST_CASE("anchored fidi") {
  const std::vector<LatticePoint> p0{LatticePoint{0}};
  const std::vector<LatticePoint> p01{LatticePoint{0}, LatticePoint{1}};
  auto a = fidi_neglog_anchored(*independent_model(), p0, std::vector<double>{1.0}, 1000, RngStream(8));
  CHECK(a.estimate == 1.0);
  CHECK(a.std_error == 0.0);
  a = fidi_neglog_anchored(*independent_model(), p01, std::vector<double>{1.0, 1.0}, 1000, RngStream(8));
  CHECK(a.estimate == 2.0);
  const auto seq = sequence_model_1d({3.0, 1.0});
  const std::vector<double> th{1.0, 0.7};
  const auto l = fidi_neglog(*seq, p01, th, 100000, RngStream(9));
  const auto r = fidi_neglog_anchored(*seq, p01, th, 100000, RngStream(10));
  CHECK(agree_within(l, r, 3.0));
}

TEST_CASE("Y fidi") {
  const LatticePoint h{1};
  const std::vector<LatticePoint> ph{h};
  auto r = y_fidi_cdf(*br(), h, ph, std::vector<double>{1.0}, 1000, RngStream(11));
  CHECK(r.estimate == doctest::Approx(0.0));
  r = y_fidi_cdf(*br(), h, ph, std::vector<double>{1e6}, 10000, RngStream(11));
  CHECK(r.estimate == doctest::Approx(1.0).epsilon(1e-5));
  const std::vector<LatticePoint> pt{LatticePoint{3}};
  std::uint64_t k = 0;
  for (double y : {0.5, 1.5, 3.0}) {
    for (auto src : {TiltSource::shift, TiltSource::tilt}) {
      r = y_fidi_cdf(*br(), h, pt, std::vector<double>{y}, 100000, RngStream(12).child(k++), src);
      INFO("y = " << y << " estimate " << r.estimate);
      CHECK(close3(r, static_cast<double>(oracle::y_marginal_cdf(y, std::sqrt(2.0)))));
    }
  }
}
