#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "modtop/diagnostics.hpp"
#include "modtop/error.hpp"

namespace modtop {

namespace {

Check make_check(std::string name, bool passed, double value, double bound,
                 std::optional<ModularValue> m = std::nullopt, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.passed = passed;
  c.value = value;
  c.bound = bound;
  c.modular = std::move(m);
  c.detail = std::move(detail);
  return c;
}

double upper(const ModularValue& m) {
  if (m.is_finite()) return m.value() + m.error_bound();
  return std::numeric_limits<double>::infinity();
}

bool certified_infinite(const SequenceVec& x, const ExponentSpec& p, const ModularValue& m,
                        const ModularConfig& cfg) {
  return m.is_infinite() && recheck_certificate(x, p, m.certificate(), cfg);
}

bool certified_infinite(const PiecewiseFunction& u, const ExponentSpec& p, const ModularValue& m,
                        const ModularConfig& cfg) {
  return m.is_infinite() && recheck_certificate(u, p, m.certificate(), cfg);
}

ExponentSpec sqrt1p() {
  ExponentSpec::Flags f;
  f.monotone_nondecreasing = true;
  f.declared_unbounded = true;
  return ExponentSpec::custom_sequence(
      [](std::size_t n) { return 1.0 + std::sqrt(static_cast<double>(n)); }, f, "sqrt1p");
}

// p_n = n, center 1, inner point (1 - eps) 1, approximants its prefixes
BallWitness pn_equals_n(double delta, const ModularConfig& cfg) {
  BallWitness w;
  w.scenario = "seq-pn-equals-n";
  w.delta = delta;
  const auto p = ExponentSpec::affine(1.0, 0.0);
  const double eps = std::min(0.5, delta / (2.0 + delta));
  const auto center = SequenceVec::constant(1.0);
  const auto inner = SequenceVec::constant(1.0 - eps);
  w.center = center.describe();
  w.inner_point = inner.describe();

  const ModularValue r = modular_distance(inner, center, p, cfg);
  w.checks.push_back(make_check("inner-point-in-ball", r.is_finite() && upper(r) < delta,
                                r.lower_bound(), delta, r));

  constexpr std::size_t kApprox = 40;
  w.approximants = kApprox;
  double worst = 0.0;
  bool decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  bool outside = true;
  ModularValue last_out = ModularValue::finite(0.0);
  for (std::size_t j = 1; j <= kApprox; ++j) {
    const auto z = inner.prefix(j);
    const ModularValue d = modular_distance(z, inner, p, cfg);
    // sum_{n > j} (1 - eps)^n
    const double exact = std::pow(1.0 - eps, static_cast<double>(j + 1)) / eps;
    worst = std::max(worst, d.is_finite() ? std::abs(d.value() - exact) / exact
                                          : std::numeric_limits<double>::infinity());
    const double dv = d.is_finite() ? d.value() : std::numeric_limits<double>::infinity();
    decreasing = decreasing && dv < prev;
    prev = dv;
    last_out = modular_distance(z, center, p, cfg);
    outside = outside && certified_infinite(z - center, p, last_out, cfg);
  }
  w.checks.push_back(make_check("approximants-converge-to-inner-point", worst <= 1e-12 && decreasing,
                                worst, 1e-12, std::nullopt,
                                "relative error against (1-eps)^(j+1)/eps, j = 1..40"));
  w.checks.push_back(make_check("approximants-outside-ball", outside,
                                last_out.lower_bound(), delta, last_out));
  return w;
}

// p_n = 1 + sqrt(n), center the indicator of n_k with p_{n_k} >= max{k, p_{n_{k-1}}}
BallWitness general_unbounded(double delta, const ModularConfig& cfg) {
  BallWitness w;
  w.scenario = "seq-general-unbounded";
  w.delta = delta;
  const auto p = sqrt1p();
  constexpr std::size_t K = 30;
  std::vector<std::size_t> idx;
  std::size_t n = 0;
  double prev = 1.0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double need = std::max(static_cast<double>(k), prev);
    do {
      ++n;
    } while (p.at_index(n) < need);
    prev = p.at_index(n);
    idx.push_back(n);
  }
  auto indicator = [&](std::size_t count, double c) {
    std::vector<std::pair<std::size_t, double>> e;
    for (std::size_t k = 0; k < count; ++k) e.emplace_back(idx[k], c);
    return SequenceVec::sparse(e);
  };
  const auto s = indicator(K, 1.0);
  const double eps = std::min(0.5, delta / (2.0 + delta));
  const auto inner = s.scaled(1.0 - eps);
  w.center = s.describe();
  w.inner_point = inner.describe();

  const ModularValue half = scaled_modular(s, p, 0.5, cfg);
  const double half_bound = 1.0 - std::ldexp(1.0, -static_cast<int>(K));
  w.checks.push_back(make_check("center-half-modular", half.is_finite() && upper(half) <= half_bound,
                                half.lower_bound(), half_bound, half));

  const ModularValue r = modular_distance(inner, s, p, cfg);
  const double r_bound = std::min(delta, eps / (1.0 - eps));
  w.checks.push_back(make_check("inner-point-in-ball", r.is_finite() && upper(r) <= r_bound && upper(r) < delta,
                                r.lower_bound(), r_bound, r));

  const ModularValue fin = eval_seq_modular(inner, p, cfg);
  const double fin_bound = (1.0 - eps) / eps;
  w.checks.push_back(make_check("inner-point-finite-modular", fin.is_finite() && upper(fin) <= fin_bound,
                                fin.lower_bound(), fin_bound, fin));

  w.approximants = K - 1;
  bool converge = true, outside = true;
  double worst = 0.0;
  ModularValue last_out = ModularValue::finite(0.0);
  for (std::size_t N = 1; N < K; ++N) {
    const auto y = indicator(N, 1.0 - eps);
    const ModularValue d = modular_distance(y, inner, p, cfg);
    const double bound = std::pow(1.0 - eps, static_cast<double>(N + 1)) / eps;
    converge = converge && d.is_finite() && upper(d) <= bound;
    worst = std::max(worst, d.lower_bound() / bound);
    // y - s has entries -1 at every n_k, k > N, of the infinite center
    InfiniteCertificate cert;
    cert.kind = InfiniteCertificate::Kind::TermsNondecreasing;
    cert.rule = rules::kUnitEntries;
    cert.first = idx[N];
    cert.last = idx[K - 1];
    cert.nonzero_only = true;
    cert.log_term = 0.0;
    cert.delta = 1.0;
    last_out = ModularValue::infinite(cert);
    outside = outside && recheck_certificate(y - s, p, cert, cfg);
  }
  w.checks.push_back(make_check("approximants-converge-to-inner-point", converge, worst, 1.0,
                                std::nullopt,
                                "rho(y_N - (1-eps)s) / ((1-eps)^(N+1)/eps), worst over N"));
  w.checks.push_back(make_check("approximants-outside-ball", outside, last_out.lower_bound(), delta,
                                last_out));
  return w;
}

// p(x) = 1/x on (0,1), center the catalog v, inner point eps v, approximants eps v_k
BallWitness lp_reciprocal(double delta, const ModularConfig& cfg) {
  BallWitness w;
  w.scenario = "Lp-reciprocal";
  w.delta = delta;
  const auto p = ExponentSpec::reciprocal({0.0, 1.0});
  const auto v = PiecewiseFunction::catalog_v();
  const double eps = std::max(0.5, 1.0 / (1.0 + delta));
  const auto inner = v.scaled(eps);
  w.center = v.describe();
  w.inner_point = inner.describe();

  const ModularValue rv = eval_fun_modular(v, p, cfg);
  w.checks.push_back(make_check("center-infinite-modular", certified_infinite(v, p, rv, cfg),
                                rv.lower_bound(), std::numeric_limits<double>::infinity(), rv));

  const ModularValue r = modular_distance(v, inner, p, cfg);
  const double r_bound = (1.0 - eps) / eps;
  w.checks.push_back(make_check("inner-point-in-ball",
                                r.is_finite() && upper(r) < r_bound && upper(r) < delta,
                                r.lower_bound(), r_bound, r));

  bool converge = true, outside = true;
  double worst = 0.0;
  ModularValue last_out = ModularValue::finite(0.0);
  for (std::size_t k = 5; k <= 20; ++k) {
    const auto vk = PiecewiseFunction::harmonic_cells(SequenceVec::constant(1.0).prefix(k));
    const ModularValue d = scaled_modular(v - vk, p, eps, cfg);
    const double bound = std::pow(eps, static_cast<double>(k + 1)) / (1.0 - eps);
    converge = converge && d.is_finite() && upper(d) < bound;
    worst = std::max(worst, d.lower_bound() / bound);
    const auto gap = v - vk.scaled(eps);
    last_out = eval_fun_modular(gap, p, cfg);
    outside = outside && certified_infinite(gap, p, last_out, cfg);
    ++w.approximants;
  }
  w.checks.push_back(make_check("approximants-converge-to-inner-point", converge, worst, 1.0,
                                std::nullopt,
                                "rho(eps(v - v_k)) / (eps^(k+1)/(1-eps)), worst over k = 5..20"));
  w.checks.push_back(make_check("approximants-outside-ball", outside, last_out.lower_bound(), delta,
                                last_out));
  return w;
}

void append(ScenarioReport& rep, const BallWitness& w) {
  for (const auto& c : w.checks) rep.checks.push_back(c);
}

void lux_boundary(ScenarioReport& rep, const ModularConfig& cfg) {
  const auto p = ExponentSpec::reciprocal({0.0, 0.5});
  const auto one = PiecewiseFunction::constant({0.0, 0.5}, 1.0);
  const ModularValue m = eval_fun_modular(one, p, cfg);
  rep.checks.push_back(make_check("modular-of-one", m.is_finite() && std::abs(m.value() - 0.5) <= 1e-6,
                                  m.lower_bound(), 0.5, m));
  NormOptions opts;
  opts.modular = cfg;
  const NormResult nr = luxemburg_norm(one, p, opts);
  rep.checks.push_back(make_check("norm-of-one", std::abs(nr.value - 1.0) <= 1e-4, nr.value, 1.0));
  for (double lambda : {1.05, 1.1, 1.5}) {
    const ModularValue s = scaled_modular(one, p, lambda, cfg);
    const bool ok = s.is_infinite() &&
                    s.certificate().kind == InfiniteCertificate::Kind::AnalyticComparison &&
                    recheck_certificate(one.scaled(lambda), p, s.certificate(), cfg);
    rep.checks.push_back(make_check("scaled-modular-infinite@" + std::to_string(lambda), ok,
                                    s.lower_bound(), std::numeric_limits<double>::infinity(), s));
  }
  const auto rel = verify_norm_modular_relations(one, p, 1e-8, opts);
  rep.checks.push_back(make_check("norm-modular-relations", rel.all_pass, rel.norm, 1.0));
  const auto rc = right_continuity_probe(one, p, default_right_lambdas(), 1e-8, 1e-3, cfg);
  rep.checks.push_back(make_check("not-right-continuous",
                                  rc.verdict == RightContinuityReport::Verdict::NotRightContinuous,
                                  rc.limit, rc.base, std::nullopt, to_string(rc.verdict)));
  rep.values.emplace_back("rho(1)", m.lower_bound());
  rep.values.emplace_back("norm(1)", nr.value);
}

void seq_pn(ScenarioReport& rep, const ModularConfig& cfg) {
  append(rep, pn_equals_n(3.0, cfg));
  const auto p = ExponentSpec::affine(1.0, 0.0);
  const auto x = SequenceVec::constant(0.5);
  std::vector<SequenceVec> family;
  for (std::size_t j = 1; j <= 40; ++j) family.push_back(x.prefix(j));
  NormOptions opts;
  opts.modular = cfg;
  const auto cr = classify_convergence(family, x, p, default_lambda_grid(), 1e-6, opts);
  rep.checks.push_back(make_check("prefixes-modular-converge", cr.modular_converges,
                                  cr.rates.back().second.lower_bound(), 1e-6,
                                  cr.rates.back().second));
  rep.checks.push_back(make_check("prefixes-do-not-converge-at-lambda-2", !cr.per_lambda.at(2.0),
                                  0.0, 0.0));
  rep.checks.push_back(make_check("prefixes-do-not-converge-in-norm", !cr.norm_converges,
                                  cr.norms.back(), 1e-6));
  rep.values.emplace_back("rho(x - x_40)", cr.rates.back().second.lower_bound());
  rep.values.emplace_back("norm(x - x_40)", cr.norms.back());
}

void lp_reciprocal_scenario(ScenarioReport& rep, const ModularConfig& cfg) {
  append(rep, lp_reciprocal(1.0, cfg));
  const auto p = ExponentSpec::reciprocal({0.0, 1.0});
  for (double eps : {0.25, 0.5}) {
    const ModularValue m = eval_fun_modular(PiecewiseFunction::catalog_v(1.0 - eps), p, cfg);
    const double bound = (1.0 - eps) / eps;
    rep.checks.push_back(make_check("scaled-catalog-bound@" + std::to_string(eps),
                                    m.is_finite() && upper(m) < bound, m.lower_bound(), bound, m));
    rep.values.emplace_back("rho((1-eps)v)@" + std::to_string(eps), m.lower_bound());
  }
}

void delta2_scenario(ScenarioReport& rep, std::uint64_t seed, const ModularConfig& cfg) {
  Delta2Options opts;
  opts.modular = cfg;
  const auto p = ExponentSpec::affine(1.0, 0.0);
  const auto v = check_delta2(p, opts);
  rep.checks.push_back(make_check("identity-exponent-unbounded", !v.bounded && v.witness.has_value(),
                                  v.p_sup, std::numeric_limits<double>::infinity()));
  if (v.witness) {
    const auto& w = *v.witness;
    const auto& x = std::get<SequenceVec>(w.element);
    const double bound = std::numbers::pi * std::numbers::pi / 6.0 + 1e-3;
    rep.checks.push_back(make_check("witness-finite-modular",
                                    w.modular.is_finite() && upper(w.modular) <= bound,
                                    w.modular.lower_bound(), bound, w.modular));
    for (const auto& s : w.scaled) {
      const bool ok = s.value.is_infinite() &&
                      recheck_certificate(x.scaled(s.lambda), p, s.value.certificate(), cfg);
      rep.checks.push_back(make_check("witness-infinite@" + std::to_string(s.lambda), ok,
                                      s.value.lower_bound(), std::numeric_limits<double>::infinity(),
                                      s.value));
    }
    rep.values.emplace_back("rho(witness)", w.modular.lower_bound());
  }
  const auto pr = ExponentSpec::reciprocal({0.0, 0.5});
  const auto vr = check_delta2(pr, opts);
  bool fn_ok = !vr.bounded && vr.witness.has_value();
  if (fn_ok) {
    const auto& u = std::get<PiecewiseFunction>(vr.witness->element);
    fn_ok = vr.witness->modular.is_finite();
    for (const auto& s : vr.witness->scaled) {
      fn_ok = fn_ok && certified_infinite(u.scaled(s.lambda), pr, s.value, cfg);
    }
  }
  rep.checks.push_back(make_check("reciprocal-exponent-unbounded", fn_ok, vr.p_sup,
                                  std::numeric_limits<double>::infinity()));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(1.0, 8.0);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  bool tables_ok = true;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> vals(dim(rng));
    for (double& e : vals) e = expo(rng);
    const double mx = *std::max_element(vals.begin(), vals.end());
    const auto tv = check_delta2(ExponentSpec::table(vals), opts);
    tables_ok = tables_ok && tv.bounded && tv.p_sup == mx && !tv.witness;
  }
  rep.checks.push_back(make_check("random-tables-bounded", tables_ok, 20, 20));
}

void separability(ScenarioReport& rep, const ModularConfig& cfg) {
  auto monotone = [](const TruncationReport& t) {
    for (std::size_t i = 1; i < t.trace.size(); ++i) {
      if (t.trace[i].second > t.trace[i - 1].second) return false;
    }
    return t.reached;
  };
  const auto p = ExponentSpec::affine(1.0, 0.0);
  const auto half = truncation_density_check(SequenceVec::constant(0.5), p, 1e-3, 1'000'000, cfg);
  rep.checks.push_back(make_check("half-indicator-truncation", monotone(half) && half.N == 10,
                                  static_cast<double>(half.N), 10.0));
  rep.values.emplace_back("N(half)", static_cast<double>(half.N));
  rep.values.emplace_back("distance(half)", half.distance);

  const auto w = delta2_failure_witness(p, 50, cfg);
  const auto wt =
      truncation_density_check(std::get<SequenceVec>(w.element), p, 1e-4, 1'000'000, cfg);
  rep.checks.push_back(make_check("witness-truncation", monotone(wt),
                                  static_cast<double>(wt.N), 1e-4));
  rep.values.emplace_back("N(witness)", static_cast<double>(wt.N));
}

void finite_dim(ScenarioReport& rep, std::uint64_t seed, const ModularConfig& cfg) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(1.0, 6.0);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  bool ratio_ok = true, doubled_null = true, norm_null = true;
  double worst_ratio = 0.0;
  NormOptions opts;
  opts.modular = cfg;
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = dim(rng);
    std::vector<double> e(d), c(d);
    for (double& v : e) v = expo(rng);
    for (double& v : c) v = coord(rng);
    const auto p = ExponentSpec::table(e);
    const double psup = *std::max_element(e.begin(), e.end());
    const auto base = SequenceVec::dense(c);
    std::vector<SequenceVec> family;
    std::vector<double> doubled;
    for (int j = 1; j <= 60; ++j) {
      const auto x = base.scaled(std::exp2(-0.5 * j));
      const ModularValue m1 = eval_seq_modular(x, p, cfg);
      const ModularValue m2 = scaled_modular(x, p, 2.0, cfg);
      if (m1.value() > 0.0) {
        const double ratio = m2.value() / m1.value();
        worst_ratio = std::max(worst_ratio, ratio / std::exp2(psup));
        ratio_ok = ratio_ok && ratio <= std::exp2(psup) * (1.0 + 1e-12);
      }
      doubled.push_back(m2.value());
      family.push_back(x);
    }
    doubled_null = doubled_null && settles(doubled, 1e-6);
    const auto cr = classify_convergence(family, SequenceVec{}, p, default_lambda_grid(), 1e-6, opts);
    norm_null = norm_null && cr.modular_converges && cr.norm_converges;
  }
  rep.checks.push_back(make_check("doubling-ratio-bound", ratio_ok, worst_ratio, 1.0, std::nullopt,
                                  "max of rho(2x)/rho(x) / 2^p_sup"));
  rep.checks.push_back(make_check("doubled-families-modularly-null", doubled_null, 0.0, 1e-6));
  rep.checks.push_back(make_check("null-families-norm-null", norm_null, 0.0, 1e-6));
}

}  // namespace

bool BallWitness::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

bool ScenarioReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

BallWitness ball_interior_witness(const std::string& scenario, double delta,
                                  const ModularConfig& cfg) {
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
  if (scenario == "seq-pn-equals-n") return pn_equals_n(delta, cfg);
  if (scenario == "seq-general-unbounded") return general_unbounded(delta, cfg);
  if (scenario == "Lp-reciprocal") return lp_reciprocal(delta, cfg);
  throw Error(ErrorCode::UnknownScenario, "no ball witness for scenario '" + scenario + "'");
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "lux-boundary-p-reciprocal", "seq-pn-equals-n", "seq-general-unbounded", "Lp-reciprocal",
      "delta2-witness",            "separability",    "finite-dim-delta2"};
  return names;
}

ScenarioReport run_counterexample(const std::string& name, std::uint64_t seed,
                                  const ModularConfig& cfg) {
  ScenarioReport rep;
  rep.name = name;
  rep.seed = seed;
  if (name == "lux-boundary-p-reciprocal") {
    lux_boundary(rep, cfg);
  } else if (name == "seq-pn-equals-n") {
    seq_pn(rep, cfg);
  } else if (name == "seq-general-unbounded") {
    append(rep, general_unbounded(1.0, cfg));
  } else if (name == "Lp-reciprocal") {
    lp_reciprocal_scenario(rep, cfg);
  } else if (name == "delta2-witness") {
    delta2_scenario(rep, seed, cfg);
  } else if (name == "separability") {
    separability(rep, cfg);
  } else if (name == "finite-dim-delta2") {
    finite_dim(rep, seed, cfg);
  } else {
    throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
  }
  return rep;
}

}  // namespace modtop
