#include <utility>
#include <vector>

#include "doctest.h"
#include "modtop/error.hpp"
#include "modtop/exponent.hpp"
#include "modtop/function.hpp"
#include "modtop/sequence.hpp"
#include "support.hpp"

using namespace modtop;

TEST_CASE("runs are normalized so equal sequences compare equal") {
  auto a = SequenceVec::from_runs({{1, 2, 0.5}, {3, 5, 0.5}, {8, 9, 0.0}});
  auto b = SequenceVec::from_runs({{1, 5, 0.5}});
  CHECK(a == b);
  CHECK(a.tail_start() == 6);
  CHECK(a.support_max() == 5);

  auto c = SequenceVec::from_runs({{1, 3, 2.0}, {4, 7, 1.0}}, 1.0);
  CHECK(c.runs().size() == 1);
  CHECK(c.tail_start() == 4);
  CHECK(c.at(100) == 1.0);
  CHECK_FALSE(c.support_max().has_value());
}

TEST_CASE("gaps between runs are zero") {
  const std::vector<std::pair<std::size_t, double>> entries = {{2, 1.5}, {10, -3.0}};
  auto x = SequenceVec::sparse(entries);
  CHECK(x.at(1) == 0.0);
  CHECK(x.at(2) == 1.5);
  CHECK(x.at(5) == 0.0);
  CHECK(x.at(10) == -3.0);
  CHECK(x.at(11) == 0.0);
  CHECK(x.sup_abs() == 3.0);
}

TEST_CASE("malformed runs are rejected") {
  CHECK_THROWS_AS(SequenceVec::from_runs({{3, 2, 1.0}}), Error);
  CHECK_THROWS_AS(SequenceVec::from_runs({{1, 4, 1.0}, {3, 5, 1.0}}), Error);
  CHECK_THROWS_AS(SequenceVec::from_runs({{0, 1, 1.0}}), Error);
}

TEST_CASE("prefix keeps the first n entries of a constant tail") {
  auto half = SequenceVec::constant(0.5);
  auto p = half.prefix(10);
  CHECK(p.support_max() == 10);
  CHECK(p.at(10) == 0.5);
  CHECK(p.at(11) == 0.0);
  CHECK(half.prefix(0).is_zero());
}

TEST_CASE("subtraction refines runs and combines tails") {
  auto one = SequenceVec::constant(1.0);
  auto x = SequenceVec::constant(0.5).prefix(4);
  auto d = x - one;
  CHECK(d.at(1) == -0.5);
  CHECK(d.at(4) == -0.5);
  CHECK(d.at(5) == -1.0);
  CHECK(d.tail() == -1.0);
  CHECK(d.tail_start() == 5);
}

TEST_CASE("pointwise algebra agrees with entrywise evaluation") {
  testing::Gen gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Run> ra, rb;
    std::size_t next = 1;
    for (int k = 0; k < 4; ++k) {
      const std::size_t first = next + gen.index(0, 3);
      const std::size_t last = first + gen.index(0, 5);
      ra.push_back({first, last, gen.uniform(-2, 2)});
      next = last + 1;
    }
    next = 1;
    for (int k = 0; k < 3; ++k) {
      const std::size_t first = next + gen.index(0, 4);
      const std::size_t last = first + gen.index(0, 6);
      rb.push_back({first, last, gen.uniform(-2, 2)});
      next = last + 1;
    }
    const double ta = trial % 3 == 0 ? 0.0 : gen.uniform(-1, 1);
    const double tb = trial % 2 == 0 ? 0.0 : gen.uniform(-1, 1);
    auto a = SequenceVec::from_runs(ra, ta);
    auto b = SequenceVec::from_runs(rb, tb);
    auto diff = a - b;
    auto sum = a + b;
    auto scaled = a.scaled(-2.5);
    for (std::size_t n = 1; n < 60; ++n) {
      REQUIRE(diff.at(n) == a.at(n) - b.at(n));
      REQUIRE(sum.at(n) == a.at(n) + b.at(n));
      REQUIRE(scaled.at(n) == -2.5 * a.at(n));
    }
    CHECK((a - a).is_zero());
  }
}

TEST_CASE("exponent specs validate their values") {
  CHECK_THROWS_AS(ExponentSpec::table({2.0, 0.5}), Error);
  CHECK_THROWS_AS(ExponentSpec::affine(-1.0, 3.0), Error);
  CHECK_THROWS_AS(ExponentSpec::affine(0.5, 0.0), Error);
  CHECK_THROWS_AS(ExponentSpec::reciprocal({0.0, 2.0}), Error);

  auto identity = ExponentSpec::affine(1.0, 0.0);
  CHECK(identity.at_index(7) == 7.0);
  CHECK(identity.flags().declared_unbounded);
  CHECK(identity.describe() == "affine:1,0");

  auto t = ExponentSpec::table({2, 3, 2.5});
  CHECK(t.dimension() == 3);
  CHECK(t.known_supremum() == 3.0);
  CHECK_FALSE(t.flags().declared_unbounded);
  CHECK_THROWS_AS(t.at_index(4), Error);
  CHECK(t.describe() == "table:2,3,2.5");

  auto bad = ExponentSpec::custom_sequence([](std::size_t) { return 0.5; }, {}, "half");
  CHECK_THROWS_AS(bad.at_index(1), Error);

  auto r = ExponentSpec::reciprocal({0.0, 0.5});
  CHECK(r.at(0.25) == 4.0);
  CHECK(std::isinf(*r.known_supremum()));
}

TEST_CASE("catalog function heights and truncations") {
  auto v = PiecewiseFunction::catalog_v();
  CHECK(v.at(0.75) == doctest::Approx(1.0));
  CHECK(v.at(0.4) == doctest::Approx(std::sqrt(2.0)));
  auto vk = PiecewiseFunction::harmonic_cells(SequenceVec::constant(1.0).prefix(5));
  auto rest = v - vk;
  CHECK(rest.at(0.4) == 0.0);
  CHECK(rest.at(0.1) == doctest::Approx(harmonic_cell_height(10)));
}

TEST_CASE("piecewise functions combine on common breakpoints") {
  auto u = PiecewiseFunction::from_pieces({0.0, 0.25, 0.5}, {1.0, 2.0});
  auto w = PiecewiseFunction::from_pieces({0.0, 0.1, 0.5}, {1.0, 3.0});
  auto d = u - w;
  CHECK(d.breakpoints().size() == 4);
  CHECK(d.at(0.05) == 0.0);
  CHECK(d.at(0.2) == -2.0);
  CHECK(d.at(0.3) == -1.0);
  CHECK((u - u).is_zero());
  auto other = PiecewiseFunction::constant({0.0, 1.0}, 1.0);
  CHECK_THROWS_AS(u - other, Error);
}
