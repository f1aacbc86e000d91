#include <cmath>
#include <vector>

#include "doctest.h"
#include "modtop/error.hpp"
#include "modtop/luxemburg.hpp"
#include "support.hpp"

using namespace modtop;

namespace {

// Newton on t -> sum |x_n|^{p_n} t^{p_n} - 1, t = 1 / lambda; convex and increasing in t.
double oracle_norm(const std::vector<double>& x, const std::vector<double>& p) {
  long double t = 0.0L;
  long double sup = 0.0L;
  for (double v : x) sup = std::max<long double>(sup, std::abs(v));
  if (sup == 0.0L) return 0.0;
  t = 1.0L / sup;  // f(t) >= 0 here, Newton from the right is monotone
  for (int it = 0; it < 200; ++it) {
    long double f = -1.0L, df = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const long double a = std::abs(static_cast<long double>(x[i]));
      if (a == 0.0L) continue;
      const long double term = std::pow(a * t, static_cast<long double>(p[i]));
      f += term;
      df += p[i] * term / t;
    }
    const long double step = f / df;
    t -= step;
    if (std::abs(step) <= 1e-18L * t) break;
  }
  return static_cast<double>(1.0L / t);
}

NormOptions tight() {
  NormOptions o;
  o.tol = 1e-12;
  return o;
}

}  // namespace

TEST_CASE("constant one under p(x) = 1/x has norm one while its modular is one half") {
  auto p = ExponentSpec::reciprocal({0.0, 0.5});
  auto one = PiecewiseFunction::constant({0.0, 0.5}, 1.0);
  auto nr = luxemburg_norm(one, p);
  CHECK(nr.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(nr.bracket_width <= 1e-10);
  CHECK(nr.membership == NormResult::Membership::InSpace);

  auto rep = verify_norm_modular_relations(one, p, 1e-8);
  CHECK(rep.modular.value() == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(rep.unit_ball_at_norm);
  CHECK(rep.ball_equivalence);
  CHECK(rep.modular_below_norm);
  CHECK(rep.all_pass);
}

TEST_CASE("closed-form norms and Minkowski functionals in one dimension") {
  auto p = ExponentSpec::table({2.0});
  const std::vector<double> three = {3.0};
  auto x = SequenceVec::dense(three);
  CHECK(luxemburg_norm(x, p).value == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(minkowski_functional(x, p, 4.0) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(minkowski_functional(x, p, 1.0) == luxemburg_norm(x, p).value);
  CHECK(luxemburg_norm(SequenceVec{}, p).value == 0.0);
  CHECK(verify_norm_modular_relations(SequenceVec{}, p, 1e-8).all_pass);
  CHECK_THROWS_AS(minkowski_functional(x, p, 0.0), Error);
}

TEST_CASE("tiny and huge vectors are bracketed across the probe range") {
  auto p = ExponentSpec::table({2.0, 3.0});
  const std::vector<double> small = {1e-9, 0.0};
  CHECK(luxemburg_norm(SequenceVec::dense(small), p).value == doctest::Approx(1e-9).epsilon(1e-9));
  const std::vector<double> big = {0.0, 1e12};
  CHECK(luxemburg_norm(SequenceVec::dense(big), p).value == doctest::Approx(1e12).epsilon(1e-9));
}

TEST_CASE("vectors outside the modular space") {
  // under p_n = n, rho(1 / lambda) = 1 / (lambda - 1)
  auto identity = ExponentSpec::affine(1.0, 0.0);
  CHECK(luxemburg_norm(SequenceVec::constant(1.0), identity).value ==
        doctest::Approx(2.0).epsilon(1e-10));
  try {
    luxemburg_norm(SequenceVec::constant(1.0), ExponentSpec::affine(0.0, 2.0));
    FAIL("expected NotInModularSpace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInModularSpace);
  }
}

TEST_CASE("indeterminate modulars block the bisection") {
  auto flat = ExponentSpec::custom_sequence([](std::size_t n) { return 2.0 + 1e-13 * std::sin(n); },
                                            {}, "wiggle");
  try {
    luxemburg_norm(SequenceVec::constant(0.5), flat);
    FAIL("expected NormUncertain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NormUncertain);
  }
}

TEST_CASE("norms of the bounded geometric exponent follow the closed-form modular") {
  auto p = ExponentSpec::affine(0.0, 2.0);
  auto x = SequenceVec::constant(0.5).prefix(4);
  // rho(x / lambda) = 4 (0.5 / lambda)^2 = 1  <=>  lambda = 1
  CHECK(luxemburg_norm(x, p).value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Minkowski functionals are monotone in the radius") {
  testing::Gen gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = gen.index(1, 3);
    auto p = gen.table(dim);
    auto x = gen.vector(dim, 3.0);
    if (x.is_zero()) continue;
    const double m1 = minkowski_functional(x, p, 1.0);
    const double m2 = minkowski_functional(x, p, 2.0);
    CHECK(m2 <= m1 + 1e-10 * m1);
    CHECK(m1 <= 2.0 * m2 * (1 + 1e-10));
  }
}

TEST_CASE("property: norm-modular relations on random table vectors") {
  testing::Gen gen(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = gen.index(1, 3);
    auto p = gen.table(dim);
    const auto vals = gen.values(dim, trial % 2 ? 0.9 : 2.5);
    auto x = SequenceVec::dense(vals);
    const auto rep = verify_norm_modular_relations(x, p, 1e-8);
    REQUIRE(rep.all_pass);
    REQUIRE(rep.norm == doctest::Approx(oracle_norm(vals, p.values())).epsilon(1e-9));
  }
}

TEST_CASE("property: homogeneity, triangle inequality, scaled norms and sup bound") {
  testing::Gen gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = gen.index(1, 3);
    auto p = gen.table(dim);
    auto x = gen.vector(dim, 2.0);
    auto y = gen.vector(dim, 2.0);
    const double nx = luxemburg_norm(x, p, tight()).value;
    const double ny = luxemburg_norm(y, p, tight()).value;

    for (double c : {-2.0, -1.0, 0.5, 3.0}) {
      const double ncx = luxemburg_norm(x.scaled(c), p, tight()).value;
      REQUIRE(std::abs(ncx - std::abs(c) * nx) <= 2e-10);
    }
    REQUIRE(luxemburg_norm(x + y, p, tight()).value <= nx + ny + 2e-10);

    for (double alpha : {0.25, 0.5, 2.0, 4.0}) {
      // ||x|| under rho_alpha is the norm of alpha x under rho
      const double na = luxemburg_norm(x.scaled(alpha), p, tight()).value;
      if (alpha < 1) {
        REQUIRE(alpha * nx <= na + 1e-8);
        REQUIRE(na <= nx + 1e-8);
      } else {
        REQUIRE(nx <= na + 1e-8);
        REQUIRE(na <= alpha * nx + 1e-8);
      }
    }
    REQUIRE(x.sup_abs() <= nx + 1e-10);
  }
}
