#include <cmath>

#include "doctest.h"
#include "maxstable/estimators.hpp"
#include "maxstable/variogram.hpp"
#include "oracles.hpp"

using namespace maxstable;

namespace {

ModelRef br(double s = 1.0) { return brown_resnick(Variogram::power(1, s, 1.0)); }

bool close3(const EstimateReport& r, double target) {
  return std::abs(r.estimate - target) <= 3.0 * r.std_error + 1e-12;
}

const Window kW = Window::cube(1, -20, 20);

}  // namespace

TEST_CASE("independent model is exact") {
  const auto m = independent_model();
  const RngStream rng(1);
  AnchorMap fm{AnchorMap::Kind::first_max, LatticeOrder::lexicographic};
  AnchorMap fe{AnchorMap::Kind::first_exceed, LatticeOrder::lexicographic};
  for (const auto& r : {theta_ratio(*m, kW, 1000, rng), theta_exceed(*m, kW, 1000, rng),
                        theta_anchor(*m, kW, fm, 1000, rng), theta_anchor(*m, kW, fe, 1000, rng),
                        theta_difference(*m, kW, 1000, rng)}) {
    INFO(r.method);
    CHECK(r.estimate == 1.0);
    CHECK(r.std_error == 0.0);
  }
  const auto pk = theta_pickands(*m, 10, 100000, rng);
  CHECK(close3(pk, oracle::independent_pickands(10, 1)));
}

TEST_CASE("sequence model") {
  const auto m31 = sequence_model_1d({3.0, 1.0});
  const auto m11 = sequence_model_1d({1.0, 1.0});
  const RngStream rng(2);
  AnchorMap fm{AnchorMap::Kind::first_max, LatticeOrder::lexicographic};
  CHECK(theta_ratio(*m31, kW, 100000, rng.child(0)).estimate == doctest::Approx(0.75));  // constant ratio
  CHECK(close3(theta_exceed(*m31, kW, 100000, rng.child(1)), 0.75));
  CHECK(close3(theta_anchor(*m31, kW, fm, 100000, rng.child(2)), 0.75));
  CHECK(close3(theta_difference(*m11, kW, 100000, rng.child(3)), 0.5));
  CHECK(close3(theta_difference(*m31, kW, 100000, rng.child(4)), 0.75));
}

TEST_CASE("alternating model: estimates shrink with the window") {
  const auto m = alternating_model();
  double prev = 2.0;
  for (int r : {10, 20, 30}) {  // even radius: the outer face holds non-zero values
    const auto w = Window::cube(1, -r, r);
    const auto t = theta_ratio(*m, w, 200, RngStream(3));
    CHECK(t.estimate == doctest::Approx(1.0 / (r + 1)).epsilon(0.2));
    CHECK(t.estimate < prev);
    CHECK(t.diagnostics.at("divergence_rate") == 1.0);
    prev = t.estimate;
    const auto e = theta_exceed(*m, w, 200, RngStream(3));
    CHECK(e.estimate < 1.0 / r + 1e-12);
  }
}

TEST_CASE("Brown-Resnick cross agreement") {
  const auto m = br();
  const Window w = Window::cube(1, -30, 30);
  const RngStream rng(4);
  const auto ratio = theta_ratio(*m, w, 20000, rng.child(0));
  const auto exceed = theta_exceed(*m, w, 20000, rng.child(1));
  const auto diff = theta_difference(*m, w, 20000, rng.child(2));
  const auto fe = theta_anchor(*m, w, {AnchorMap::Kind::first_exceed, LatticeOrder::lexicographic}, 20000,
                               rng.child(3));
  const auto le = theta_anchor(*m, w, {AnchorMap::Kind::last_exceed, LatticeOrder::lexicographic}, 20000,
                               rng.child(4));
  CHECK(agree_within(ratio, exceed, 3.0));
  CHECK(agree_within(ratio, diff, 3.0));
  CHECK(agree_within(fe, le, 3.0));
}

TEST_CASE("Pickands sweep") {
  const auto m = sequence_model_1d({3.0, 1.0});
  const std::vector<LatticePoint::Coord> ns{10, 40, 160};
  const auto sweep = theta_pickands_sweep(*m, ns, 40000, RngStream(5));
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].estimate > sweep[2].estimate);
  for (const auto& r : sweep) CHECK(r.estimate > 0.75 - 3.0 * r.std_error);
  CHECK(std::abs(sweep[2].estimate - 0.75) < 3.0 * sweep[2].std_error + 1.0 / 160);
}

TEST_CASE("block estimator") {
  const auto ind = independent_model();
  const auto r = theta_block(*ind, 1e4, 20, 1.0, 20000, RngStream(6));
  CHECK(close3(r, oracle::independent_block(1e4, 20, 1.0, 1)));
  CHECK(r.estimate == doctest::Approx(1.05).epsilon(0.01));

  const auto seq = sequence_model_1d({3.0, 1.0});
  std::vector<EstimateReport> taus;
  for (double tau : {0.5, 1.0, 2.0}) {
    taus.push_back(theta_block(*seq, 1e6, 40, tau, 40000, RngStream(7)));
    CHECK(std::abs(taus.back().estimate - 0.75) < 3.0 * taus.back().std_error + 1.0 / 40);
  }
  CHECK(agree_within(taus[0], taus[1], 3.0));
  CHECK(agree_within(taus[1], taus[2], 3.0));
  CHECK_THROWS_AS(theta_block(*seq, 100, 40, 1.0, 100, RngStream(7)), UsageError);
}

TEST_CASE("Brown-Resnick lower bound") {
  const auto v = Variogram::power(1, 1.0, 1.0);
  const auto origin = br_lower_bound(v, Window::cube(1, 0, 0));
  CHECK(origin.support_sum == 1.0);
  const auto b = br_lower_bound(v, Window::cube(1, -50, 50));
  CHECK(b.tail_known);
  CHECK_FALSE(b.divergent);
  CHECK(b.support_sum == doctest::Approx(static_cast<double>(oracle::br_bound_sum_1d(1.0, 50))).epsilon(1e-14));
  // The tail bound covers the omitted mass without much slack.
  const double rest = static_cast<double>(oracle::br_bound_sum_1d(1.0, 100000) - oracle::br_bound_sum_1d(1.0, 50));
  CHECK(b.tail_bound >= rest);
  CHECK(b.tail_bound <= rest * 1.5);
  CHECK(b.value == doctest::Approx(oracle::kBrBoundGoldenS1).epsilon(1e-6));
  CHECK(b.value <= oracle::kBrBoundGoldenS1);

  for (double s : {0.5, 1.0, 2.0}) {
    const auto lb = br_lower_bound(Variogram::power(1, s, 1.0), Window::cube(1, -30, 30));
    const auto t = theta_ratio(*br(s), Window::cube(1, -30, 30), 10000, RngStream(8));
    CHECK(t.estimate >= lb.value - 3.0 * t.std_error);
  }
  const auto tab = br_lower_bound(Variogram::table({{LatticePoint{1}, 1.0}, {LatticePoint{2}, 2.0}}),
                                  Window::cube(1, -2, 2));
  CHECK_FALSE(tab.tail_known);
}

TEST_CASE("anti-clustering probe") {
  const std::vector<LatticePoint::Coord> ms{1, 2, 4, 8};
  const Window w = Window::cube(1, -20, 20);
  for (const auto& r : anti_clustering_probe(*independent_model(), ms, w, 1000, RngStream(9))) {
    CHECK(r.estimate == 1.0);
  }
  for (const auto& r : anti_clustering_probe(*alternating_model(), ms, w, 1000, RngStream(9))) {
    CHECK(r.estimate == 0.0);
  }
  const auto b = anti_clustering_probe(*br(), ms, w, 20000, RngStream(9));
  for (std::size_t k = 1; k < b.size(); ++k) CHECK(b[k].estimate >= b[k - 1].estimate - 3.0 * b[k].std_error);
  CHECK(b.back().estimate > b.front().estimate);
  const auto far = anti_clustering_probe(*br(), std::vector<LatticePoint::Coord>{32}, Window::cube(1, -40, 40), 20000,
                                         RngStream(10));
  CHECK(far[0].estimate > 0.97);
  CHECK_THROWS_AS(anti_clustering_probe(*br(), std::vector<LatticePoint::Coord>{4, 2}, w, 10, RngStream(9)),
                  UsageError);
}

TEST_CASE("mixture combination") {
  EstimateReport a, b;
  a.estimate = 0.75;
  a.std_error = 0.01;
  b.estimate = 0.0;
  b.std_error = 0.02;
  const auto m = theta_mixture(0.7, a, b);
  CHECK(m.estimate == doctest::Approx(0.525));
  CHECK(m.std_error == doctest::Approx(std::hypot(0.7 * 0.01, 0.3 * 0.02)));
  const auto s = theta_mixture(0.3, b, a);
  CHECK(s.estimate == doctest::Approx(m.estimate));
  CHECK(s.std_error == doctest::Approx(m.std_error));
  a.estimate = 1.0;
  CHECK(theta_mixture(0.5, a, a).estimate == doctest::Approx(1.0));
}
