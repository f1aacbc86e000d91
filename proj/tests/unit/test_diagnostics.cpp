#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "modtop/diagnostics.hpp"
#include "modtop/error.hpp"
#include "support.hpp"

using namespace modtop;

namespace {

ExponentSpec log1p_exponent() {
  ExponentSpec::Flags f;
  f.monotone_nondecreasing = true;
  f.declared_unbounded = true;
  return ExponentSpec::custom_sequence(
      [](std::size_t n) { return 1.0 + std::log(static_cast<double>(n) + 1.0); }, f, "log1p");
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("delta2 verdicts for closed-form exponents") {
  auto t = check_delta2(ExponentSpec::table({2, 3, 2.5}));
  CHECK(t.bounded);
  CHECK(t.p_sup == 3.0);
  CHECK_FALSE(t.witness.has_value());

  auto c = check_delta2(ExponentSpec::affine(0.0, 4.0));
  CHECK(c.bounded);
  CHECK(c.p_sup == 4.0);

  auto n = check_delta2(ExponentSpec::affine(1.0, 0.0));
  CHECK_FALSE(n.bounded);
  CHECK(std::isinf(n.p_sup));
  REQUIRE(n.witness.has_value());
  CHECK(n.witness->indices.size() == 50);

  auto r = check_delta2(ExponentSpec::reciprocal({0.0, 0.5}));
  CHECK_FALSE(r.bounded);
  REQUIRE(r.witness.has_value());
  const auto& one = std::get<PiecewiseFunction>(r.witness->element);
  CHECK(r.witness->modular.value() == doctest::Approx(0.5).epsilon(1e-8));
  for (const auto& s : r.witness->scaled) {
    REQUIRE(s.value.is_infinite());
    CHECK(recheck_certificate(one.scaled(s.lambda), ExponentSpec::reciprocal({0.0, 0.5}),
                              s.value.certificate()));
  }

  CHECK(check_delta2(ExponentSpec::reciprocal({0.25, 0.5})).p_sup == 4.0);
  CHECK(check_delta2(ExponentSpec::piecewise({0, 0.5, 1}, {2, 7})).p_sup == 7.0);
}

TEST_CASE("delta2 verdicts for custom exponents use declarations and the probe") {
  auto bounded = ExponentSpec::custom_sequence(
      [](std::size_t n) { return 3.0 - 1.0 / static_cast<double>(n); }, {}, "three");
  auto v = check_delta2(bounded);
  CHECK(v.bounded);
  CHECK(v.p_sup == doctest::Approx(3.0).epsilon(1e-5));

  auto undeclared = ExponentSpec::custom_sequence(
      [](std::size_t n) { return 1.0 + std::log(static_cast<double>(n) + 1.0); }, {}, "log1p");
  CHECK(code_of([&] { check_delta2(undeclared); }) == ErrorCode::UndeclaredGrowth);

  // the witness needs p > k^2, which 1 + log(n+1) only reaches past 10^7 for k = 5
  CHECK(code_of([&] { check_delta2(log1p_exponent()); }) == ErrorCode::SearchCapExceeded);
}

TEST_CASE("failure witness for p_n = n") {
  auto p = ExponentSpec::affine(1.0, 0.0);
  auto w = delta2_failure_witness(p, 50);
  const auto& x = std::get<SequenceVec>(w.element);
  for (std::size_t k = 1; k <= 50; ++k) {
    REQUIRE(w.indices[k - 1] == k * k + 1);
    const double pk = static_cast<double>(k * k + 1);
    REQUIRE(x.at(k * k + 1) == doctest::Approx(std::pow(pk, -1.0 / pk)).epsilon(1e-15));
  }
  // sum_{k <= 50} 1/(k^2 + 1), mpmath
  CHECK(w.modular.value() == doctest::Approx(1.0568753013665347).epsilon(1e-14));
  CHECK(w.modular.value() <= std::numbers::pi * std::numbers::pi / 6.0);
  CHECK(w.finite_bound == doctest::Approx(1.6251327336215293).epsilon(1e-14));
  REQUIRE(w.scaled.size() == 3);
  for (const auto& s : w.scaled) {
    REQUIRE(s.value.is_infinite());
    CHECK(s.value.certificate().rule == rules::kWitnessGrowth);
    CHECK(recheck_certificate(x.scaled(s.lambda), p, s.value.certificate()));
    // the certificate does not hold for the unscaled witness, whose terms decrease
    CHECK_FALSE(recheck_certificate(x, p, s.value.certificate()));
  }
  CHECK(code_of([&] { delta2_failure_witness(ExponentSpec::affine(0.0, 2.0), 50); }) ==
        ErrorCode::NotUnbounded);
  CHECK(code_of([&] { delta2_failure_witness(p, 5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("right-continuity probes") {
  using V = RightContinuityReport::Verdict;
  auto one = PiecewiseFunction::constant({0.0, 0.5}, 1.0);
  auto r = right_continuity_probe(one, ExponentSpec::reciprocal({0.0, 0.5}));
  CHECK(r.verdict == V::NotRightContinuous);
  CHECK(r.base == doctest::Approx(0.5).epsilon(1e-8));

  const std::vector<double> ones = {1.0, 1.0};
  auto x = SequenceVec::dense(ones);
  auto t = right_continuity_probe(x, ExponentSpec::table({2, 3}));
  CHECK(t.verdict == V::RightContinuous);
  CHECK(t.limit == doctest::Approx(2.0).epsilon(1e-9));

  CHECK(right_continuity_probe(SequenceVec{}, ExponentSpec::table({2})).verdict ==
        V::RightContinuous);
  CHECK(code_of([&] {
          right_continuity_probe(x, ExponentSpec::table({2, 3}), std::vector<double>{1.5, 1.7});
        }) == ErrorCode::InvalidArgument);

  auto wiggle = ExponentSpec::custom_sequence(
      [](std::size_t n) { return 2.0 + 1e-13 * std::sin(static_cast<double>(n)); }, {}, "wiggle");
  CHECK(right_continuity_probe(SequenceVec::constant(0.5), wiggle).verdict == V::Inconclusive);
}

TEST_CASE("property: right-continuity holds for random table vectors") {
  testing::Gen gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = gen.index(1, 4);
    auto p = gen.table(dim);
    auto x = gen.vector(dim, 2.0);
    auto r = right_continuity_probe(x, p);
    REQUIRE(r.verdict == RightContinuityReport::Verdict::RightContinuous);
  }
}

TEST_CASE("prefixes of one half converge modularly but not in norm under p_n = n") {
  auto p = ExponentSpec::affine(1.0, 0.0);
  auto x = SequenceVec::constant(0.5);
  std::vector<SequenceVec> family;
  for (std::size_t j = 1; j <= 40; ++j) family.push_back(x.prefix(j));
  auto rep = classify_convergence(family, x, p);
  CHECK(rep.modular_converges);
  CHECK(rep.per_lambda.at(0.25));
  CHECK(rep.per_lambda.at(0.5));
  CHECK(rep.per_lambda.at(1.0));
  CHECK_FALSE(rep.per_lambda.at(2.0));
  CHECK_FALSE(rep.per_lambda.at(4.0));
  CHECK_FALSE(rep.norm_converges);
  for (const auto& [j, m] : rep.rates) {
    REQUIRE(m.value() == doctest::Approx(std::ldexp(1.0, -static_cast<int>(j))).epsilon(1e-12));
  }
  // ||x - x_40|| = 1 / (2r) with r^41 = 1 - r, mpmath root
  CHECK(rep.norms.back() == doctest::Approx(0.53454531320072446).epsilon(1e-9));
}

TEST_CASE("constant and perturbation families converge everywhere") {
  auto p = ExponentSpec::table(std::vector<double>(8, 2.0));
  const std::vector<double> base = {1, -2, 0.5, 0, 3, 1, 1, 2};
  auto limit = SequenceVec::dense(base);
  std::vector<SequenceVec> constant(5, limit);
  auto c = classify_convergence(constant, limit, p);
  CHECK(c.modular_converges);
  CHECK(c.norm_converges);
  for (const auto& [l, ok] : c.per_lambda) CHECK(ok);

  std::vector<SequenceVec> family;
  for (std::size_t j = 1; j <= 10000; ++j) {
    const std::vector<std::pair<std::size_t, double>> e = {{(j - 1) % 8 + 1, 1.0 / j}};
    family.push_back(limit + SequenceVec::sparse(e));
  }
  auto rep = classify_convergence(family, limit, p, default_lambda_grid(), 1e-3);
  CHECK(rep.modular_converges);
  CHECK(rep.norm_converges);
  for (const auto& [l, ok] : rep.per_lambda) CHECK(ok);
  CHECK(rep.norms.back() == doctest::Approx(1e-4).epsilon(1e-9));
}

TEST_CASE("property: norm convergence implies convergence at every grid point") {
  testing::Gen gen(77);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = gen.index(1, 4);
    auto p = gen.table(dim, 1.0, 4.0);
    auto base = gen.vector(dim, 2.0);
    auto dir = gen.vector(dim, 1.0);
    const double rate = gen.uniform(0.3, 0.95);
    std::vector<SequenceVec> family;
    for (int j = 1; j <= 120; ++j) family.push_back(base + dir.scaled(std::pow(rate, j)));
    auto rep = classify_convergence(family, base, p, default_lambda_grid(), 1e-6);
    if (rep.norm_converges) {
      for (const auto& [l, ok] : rep.per_lambda) REQUIRE(ok);
    }
    CHECK(rep.modular_converges == rep.per_lambda.at(1.0));
  }
}

TEST_CASE("ball witnesses") {
  auto a = ball_interior_witness("seq-pn-equals-n", 3.0);
  CHECK(a.passed());
  CHECK(a.checks.front().value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ball_interior_witness("seq-pn-equals-n", 0.1).passed());

  auto b = ball_interior_witness("seq-general-unbounded", 1.0);
  CHECK(b.passed());
  CHECK(ball_interior_witness("seq-general-unbounded", 0.01).passed());

  auto c = ball_interior_witness("Lp-reciprocal", 1.0);
  CHECK(c.passed());
  CHECK(c.approximants == 16);
  for (const auto& chk : c.checks) {
    INFO(chk.name);
    CHECK(chk.passed);
  }

  CHECK(code_of([] { ball_interior_witness("nope", 1.0); }) == ErrorCode::UnknownScenario);
}

TEST_CASE("truncation density") {
  auto p = ExponentSpec::affine(1.0, 0.0);
  auto half = truncation_density_check(SequenceVec::constant(0.5), p, 1e-3);
  CHECK(half.reached);
  CHECK(half.N == 10);
  CHECK(half.distance == doctest::Approx(std::ldexp(1.0, -10)).epsilon(1e-12));
  for (std::size_t i = 1; i < half.trace.size(); ++i) {
    CHECK(half.trace[i].second < half.trace[i - 1].second);
  }

  const std::vector<double> finite = {1, 2, 0, 0.5};
  auto f = truncation_density_check(SequenceVec::dense(finite), ExponentSpec::table({2, 2, 2, 2}), 1e-9);
  CHECK(f.N == 4);
  CHECK(f.distance == 0.0);

  // the K = 50 witness has smallest tail entry 1/2501 > 1e-4, so only the full prefix qualifies
  auto w = delta2_failure_witness(p, 50);
  auto wt = truncation_density_check(std::get<SequenceVec>(w.element), p, 1e-4);
  CHECK(wt.N == 2501);
  CHECK(wt.trace[2].second == doctest::Approx(1.0568753013665347 - 0.5).epsilon(1e-13));

  CHECK(code_of([&] { truncation_density_check(SequenceVec::constant(1.0), p, 1e-3); }) ==
        ErrorCode::NotFiniteModular);
}

TEST_CASE("functional probes") {
  auto p = ExponentSpec::affine(1.0, 0.0);
  const std::vector<std::pair<std::size_t, double>> e3 = {{3, 1.0}};
  auto coord3 = SequenceVec::sparse(e3);
  auto half = SequenceVec::constant(0.5);
  std::vector<SequenceVec> complements;
  for (std::size_t j = 1; j <= 30; ++j) complements.push_back(half - half.prefix(j));
  auto rep = functional_probe(coord3, {complements}, p);
  REQUIRE(rep.families.size() == 1);
  CHECK(rep.families[0].modularly_null);
  CHECK(rep.families[0].functional_to_zero);
  CHECK(rep.families[0].functional[0] == 0.5);
  CHECK(rep.families[0].functional[3] == 0.0);
  CHECK(rep.coordinate_bound);
  CHECK(rep.bounded_on_ball);

  auto zero = functional_probe(SequenceVec{}, {complements}, p);
  CHECK(zero.families[0].functional_to_zero);
  CHECK(zero.bounded_on_ball);

  const std::vector<double> c = {1.0, 2.0};
  auto r = functional_probe(SequenceVec::dense(c), {}, ExponentSpec::table({2, 3}), 1e-6, 50, 9);
  CHECK(r.coefficient_bound == 3.0);
  CHECK(r.sampled_sup > 0.0);
  CHECK(r.sampled_sup <= 3.0);
  CHECK(r.bounded_on_ball);
  CHECK(r.coordinate_bound);
}

TEST_CASE("l-infinity isomorphism") {
  using K = LinfVerdict::Kind;
  auto n = check_linf_isomorphism(ExponentSpec::affine(1.0, 0.0));
  CHECK(n.kind == K::Isomorphic);
  CHECK(n.lambda == 0.5);
  CHECK(n.sum.value() == doctest::Approx(1.0).epsilon(1e-14));

  CHECK(check_linf_isomorphism(ExponentSpec::affine(0.0, 2.0)).kind == K::NotIsomorphic);

  auto l = check_linf_isomorphism(log1p_exponent());
  CHECK(l.kind == K::Isomorphic);
  CHECK(l.lambda <= std::exp(-2.0));
  CHECK(l.lambda == 0.125);
  // sum_n (1/8)^(1 + log(n+1)), mpmath
  CHECK(std::abs(l.sum.value() - 0.072033306962223165) <= l.sum.error_bound() + 1e-8);
  CHECK(eval_seq_modular(SequenceVec::constant(l.lambda), log1p_exponent()).is_finite());

  auto undeclared = ExponentSpec::custom_sequence([](std::size_t n) { return static_cast<double>(n); },
                                                  {}, "n");
  CHECK(check_linf_isomorphism(undeclared).kind == K::Inconclusive);
  CHECK(code_of([] { check_linf_isomorphism(ExponentSpec::table({2})); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("property: doubling bound and null families for bounded exponents") {
  testing::Gen gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = gen.index(1, 5);
    auto p = gen.table(dim);
    const double psup = check_delta2(p).p_sup;
    auto base = gen.vector(dim, 3.0);
    std::vector<double> doubled;
    for (int j = 1; j <= 60; ++j) {
      auto x = base.scaled(std::exp2(-0.5 * j));
      const double m1 = eval_seq_modular(x, p).value();
      const double m2 = scaled_modular(x, p, 2.0).value();
      if (m1 > 0) REQUIRE(m2 <= std::exp2(psup) * m1 * (1 + 1e-12));
      doubled.push_back(m2);
    }
    CHECK(settles(doubled, 1e-6));
  }
}

TEST_CASE("registry scenarios pass and rerun deterministically") {
  for (const auto& name : scenario_names()) {
    auto a = run_counterexample(name, 42);
    for (const auto& c : a.checks) {
      INFO(name << ": " << c.name << " value=" << c.value << " bound=" << c.bound);
      CHECK(c.passed);
    }
    auto b = run_counterexample(name, 42);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
      CHECK(a.checks[i].passed == b.checks[i].passed);
      CHECK(a.checks[i].value == b.checks[i].value);
    }
    CHECK(a.values == b.values);
  }
  CHECK(code_of([] { run_counterexample("no-such-scenario"); }) == ErrorCode::UnknownScenario);
}
