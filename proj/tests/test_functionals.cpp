#include "doctest.h"
#include "maxstable/functionals.hpp"
#include "maxstable/spectral.hpp"
#include "maxstable/variogram.hpp"

using namespace maxstable;

namespace {

FieldSample field(int lo, std::vector<double> v, FieldTag tag = FieldTag::Theta) {
  const int hi = lo + static_cast<int>(v.size()) - 1;
  return FieldSample(Window::cube(1, lo, hi), std::move(v), tag);
}

}  // namespace

TEST_CASE("first_max") {
  auto r = first_max(field(-1, {0.2, 1.0, 0.7}));
  REQUIRE(r.value);
  CHECK(*r.value == LatticePoint{0});
  r = first_max(field(-1, {1.0, 0.0, 0.0, 0.0, 1.0}));
  REQUIRE(r.value);
  CHECK(*r.value == LatticePoint{-1});
  r = last_max(field(-1, {1.0, 0.0, 0.0, 0.0, 1.0}));
  CHECK(*r.value == LatticePoint{3});
  CHECK(first_max(field(-1, {0.0, 0.0, 0.0})).is_infinite());
  r = first_max(field(-1, {1.0, 0.0, 0.0, 0.0, 1.0}), LatticeOrder::reversed_lexicographic);
  CHECK(*r.value == LatticePoint{3});
}

TEST_CASE("first_exceed") {
  auto r = first_exceed(field(-1, {0.5, 2.0, 3.0}, FieldTag::Y));
  REQUIRE(r.value);
  CHECK(*r.value == LatticePoint{0});
  r = first_exceed(field(-1, {1.5, 2.0}, FieldTag::Y));
  CHECK(*r.value == LatticePoint{-1});
  CHECK(first_exceed(field(-1, {1.0, 0.5, 1.0}, FieldTag::Y)).is_infinite());
  r = last_exceed(field(-1, {1.5, 2.0, 0.5}, FieldTag::Y));
  CHECK(*r.value == LatticePoint{0});
}

TEST_CASE("sparse and dense anchors agree") {
  const auto m = brown_resnick(Variogram::power(1, 1.0, 1.0));
  const Window w = Window::cube(1, -6, 6);
  Engine eng = RngStream(1).engine();
  for (auto kind : {AnchorMap::Kind::first_max, AnchorMap::Kind::last_max, AnchorMap::Kind::first_exceed,
                    AnchorMap::Kind::last_exceed}) {
    for (int k = 0; k < 200; ++k) {
      const auto y = sample_Y(*m, w, eng);
      const AnchorMap map{kind, LatticeOrder::lexicographic};
      const auto a = apply_anchor(map, y);
      const auto e = to_sparse(y);
      const auto b = apply_anchor(map, e, w);
      REQUIRE(a.value == b.value);
    }
  }
}

TEST_CASE("sum and count") {
  CHECK(sum_alpha(sample_independent_theta(Window::cube(1, -5, 5)), 1.0).value == 1.0);
  // c = (3,1): Theta is {0:1, 1:1/3} or {-1:3, 0:1}
  CHECK(sum_alpha(field(0, {1.0, 1.0 / 3.0}), 1.0).value == doctest::Approx(4.0 / 3.0));
  CHECK(sum_alpha(field(-1, {3.0, 1.0}), 1.0).value == doctest::Approx(4.0));
  CHECK(sum_alpha(field(-1, {3.0, 1.0}), 2.0).value == doctest::Approx(10.0));

  auto y = sample_independent_theta(Window::cube(1, -5, 5)).scaled(7.0);
  y.set_tag(FieldTag::Y);
  CHECK(exceed_count(y).count == 1);
  auto ay = sample_alternating_theta(Window::cube(1, -10, 10)).scaled(1.7);
  ay.set_tag(FieldTag::Y);
  const auto c = exceed_count(ay);
  CHECK(c.count == 11);
  CHECK(c.tail_flag);
  CHECK_THROWS_AS(exceed_count(field(0, {2.0})), UsageError);
}

TEST_CASE("anchoring conditions") {
  const auto m = brown_resnick(Variogram::power(1, 1.0, 1.0));
  const Window w = Window::cube(1, -8, 8);
  Engine eng = RngStream(2).engine();
  std::vector<FieldSample> thetas, ys;
  for (int k = 0; k < 1000; ++k) {
    thetas.push_back(sample_theta(*m, w, eng));
    ys.push_back(sample_Y(*m, w, eng));
  }
  CHECK(check_anchoring(AnchorMap{AnchorMap::Kind::first_max, LatticeOrder::lexicographic}, thetas).pass());
  CHECK(check_anchoring(AnchorMap{AnchorMap::Kind::first_exceed, LatticeOrder::lexicographic}, ys).pass());
  CHECK(check_anchoring(AnchorMap{AnchorMap::Kind::last_exceed, LatticeOrder::reversed_lexicographic}, ys).pass());
  const AnchorFunction zero = [](const FieldSample& f) {
    return AnchorResult{LatticePoint::origin(f.window().dim()), false};
  };
  const auto bad = check_anchoring(zero, ys);
  CHECK_FALSE(bad.pass());
  CHECK(bad.violations_shift > 0);
}
