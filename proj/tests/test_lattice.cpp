#include <sstream>

#include "doctest.h"
#include "maxstable/lattice.hpp"
#include "maxstable/report.hpp"
#include "maxstable/rng.hpp"

using namespace maxstable;

TEST_CASE("order comparison") {
  CHECK(order_compare(LatticeOrder::lexicographic, LatticePoint{0}, LatticePoint{0}) == Ordering::equal);
  CHECK(order_compare(LatticeOrder::lexicographic, LatticePoint{0, 1}, LatticePoint{1, 0}) == Ordering::less);
  CHECK(order_compare(LatticeOrder::reversed_lexicographic, LatticePoint{0, 1}, LatticePoint{1, 0}) ==
        Ordering::greater);
  CHECK_THROWS_AS(order_compare(LatticeOrder::lexicographic, LatticePoint{0}, LatticePoint{0, 0}), UsageError);
}

TEST_CASE("order is translation invariant") {
  Engine eng = RngStream(11).engine();
  std::uniform_int_distribution<int> u(-20, 20);
  const LatticePoint h{5, -3};
  for (int k = 0; k < 200; ++k) {
    LatticePoint a{u(eng), u(eng)}, b{u(eng), u(eng)};
    if (!lex_less(a, b)) std::swap(a, b);
    if (a == b) continue;
    CHECK(order_compare(LatticeOrder::lexicographic, a + h, b + h) == Ordering::less);
  }
}

TEST_CASE("shift_field") {
  FieldSample f(Window::cube(1, 0, 1), {1.0, 2.0}, FieldTag::Theta);
  const auto g = shift_field(f, LatticePoint{1});
  CHECK(g.window() == Window::cube(1, 1, 2));
  CHECK(g.at(LatticePoint{1}) == 1.0);
  CHECK(g.at(LatticePoint{2}) == 2.0);
  const auto id = shift_field(f, LatticePoint{0});
  CHECK(id.window() == f.window());
  const auto back = shift_field(g, LatticePoint{-1});
  CHECK(back.window() == f.window());
  CHECK(back.values()[0] == 1.0);
  CHECK(back.values()[1] == 2.0);
}

TEST_CASE("window enumeration") {
  const auto p1 = window_points(Window::cube(1, 0, 2));
  REQUIRE(p1.size() == 3);
  CHECK(p1[0] == LatticePoint{0});
  CHECK(p1[2] == LatticePoint{2});
  const auto p2 = window_points(Window::cube(2, 0, 1));
  REQUIRE(p2.size() == 4);
  CHECK(p2[0] == LatticePoint{0, 0});
  CHECK(p2[1] == LatticePoint{0, 1});
  CHECK(p2[2] == LatticePoint{1, 0});
  CHECK(p2[3] == LatticePoint{1, 1});
  const Window w(LatticePoint{-2, 3}, LatticePoint{4, 5});
  const auto pts = window_points(w);
  CHECK(pts.size() == w.size());
  CHECK(w.size() == 21);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(w.index(pts[i]) == i);
  CHECK_THROWS_AS(Window(LatticePoint{2}, LatticePoint{1}), UsageError);
}

TEST_CASE("window algebra") {
  const Window w = Window::cube(1, -2, 3);
  CHECK(w.difference(w) == Window::cube(1, -5, 5));
  CHECK(w.expanded(2) == Window::cube(1, -4, 5));
  CHECK(w.translated(LatticePoint{1}) == Window::cube(1, -1, 4));
  CHECK(w.on_boundary(LatticePoint{3}));
  CHECK_FALSE(w.on_boundary(LatticePoint{0}));
}

TEST_CASE("sparse and dense round trip") {
  const Window w = Window::cube(2, -1, 1);
  std::vector<Entry> e{{LatticePoint{-1, 0}, 0.5}, {LatticePoint{0, 0}, 1.0}, {LatticePoint{1, 1}, 2.0}};
  const auto f = to_dense(e, w, FieldTag::Theta);
  CHECK(f.value_or(LatticePoint{5, 5}, -1.0) == -1.0);
  const auto back = to_sparse(f);
  REQUIRE(back.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(back[k].at == e[k].at);
    CHECK(back[k].value == e[k].value);
  }
}

TEST_CASE("chunked runner is independent of the worker count") {
  auto run = [](unsigned workers) {
    set_worker_count(workers);
    Moments proto;
    return run_chunked(10000, RngStream(3), proto, [](Engine& eng, std::size_t n, Moments& acc) {
      for (std::size_t i = 0; i < n; ++i) acc.add(uniform01(eng));
    });
  };
  const Moments a = run(1), b = run(3);
  set_worker_count(0);
  CHECK(a.count() == 10000);
  CHECK(a.mean() == b.mean());
  CHECK(a.variance() == b.variance());
}
