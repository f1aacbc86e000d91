#include "modtop/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "modtop/error.hpp"

namespace modtop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kSearchCap = 10'000'000;

double as_double(const ModularValue& m) {
  if (m.is_finite()) return m.value();
  if (m.is_infinite()) return kInf;
  return std::numeric_limits<double>::quiet_NaN();
}

// Largest value seen in a probe and whether it keeps growing towards the end.
struct Probe {
  double head = -kInf;
  double tail = -kInf;
  double sup() const { return std::max(head, tail); }
  bool still_growing() const { return tail > head + 1e-6 * std::max(1.0, std::abs(head)); }
};

Probe probe_sequence(const ExponentSpec& p, std::size_t window) {
  Probe pr;
  const std::size_t split = window - window / 10;
  for (std::size_t n = 1; n <= window; ++n) {
    const double v = p.at_index(n);
    if (n <= split) {
      pr.head = std::max(pr.head, v);
    } else {
      pr.tail = std::max(pr.tail, v);
    }
  }
  return pr;
}

Probe probe_function(const ExponentSpec& p, std::size_t window) {
  Probe pr;
  const Interval d = *p.domain();
  const std::size_t grid = std::max<std::size_t>(16, std::min<std::size_t>(window, 10'000));
  for (std::size_t i = 1; i < grid; ++i) {
    pr.head = std::max(pr.head, p.at(d.lo + d.length() * static_cast<double>(i) / grid));
  }
  // geometric approach to both endpoints; the deepest levels form the tail
  for (int level = 1; level <= 60; ++level) {
    const double w = d.length() * std::ldexp(1.0, -level);
    const double v = std::max(p.at(d.lo + w), p.at(d.hi - w));
    if (level <= 45) {
      pr.head = std::max(pr.head, v);
    } else {
      pr.tail = std::max(pr.tail, v);
    }
  }
  return pr;
}

// Supremum of p, +inf when unbounded.
double exponent_sup(const ExponentSpec& p, std::size_t window) {
  if (auto s = p.known_supremum()) return *s;
  if (p.flags().declared_unbounded) return kInf;
  const Probe pr = p.is_sequence() ? probe_sequence(p, window) : probe_function(p, window);
  if (pr.still_growing()) {
    throw Error(ErrorCode::UndeclaredGrowth,
                "custom exponent '" + p.label() +
                    "' still grows at the end of the probe window and declares no growth");
  }
  return pr.sup();
}

Delta2Witness function_witness(const ExponentSpec& p, const ModularConfig& cfg) {
  if (p.kind() != ExponentSpec::Kind::Reciprocal) {
    throw Error(ErrorCode::InvalidArgument,
                "no witness construction for unbounded function exponent " + p.describe());
  }
  // constant one: rho(1) = |domain| while rho(lambda) is infinite for lambda > 1
  Delta2Witness w;
  const Interval d = *p.domain();
  auto one = PiecewiseFunction::constant(d, 1.0);
  w.modular = eval_fun_modular(one, p, cfg);
  w.finite_bound = d.length();
  for (double lambda : witness_lambdas()) {
    w.scaled.push_back({lambda, scaled_modular(one, p, lambda, cfg)});
  }
  w.element = std::move(one);
  return w;
}

template <class Element>
RightContinuityReport right_continuity_impl(const Element& x, const ExponentSpec& p,
                                            const std::vector<double>& lambdas, double tol,
                                            double gap, const ModularConfig& cfg) {
  using V = RightContinuityReport::Verdict;
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "empty lambda sequence");
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > 1.0) || (i > 0 && !(lambdas[i] < lambdas[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "lambdas must decrease strictly towards 1");
    }
  }
  RightContinuityReport rep;
  rep.lambdas = lambdas;
  const ModularValue base = eval_modular(x, p, cfg);
  if (base.is_indeterminate()) {
    rep.reason = "modular of x is indeterminate: " + base.reason();
    return rep;
  }
  if (base.is_infinite()) throw Error(ErrorCode::NotFiniteModular, "rho(x) must be finite");
  rep.base = base.value();
  if (x.is_zero()) {
    rep.verdict = V::RightContinuous;
    rep.limit = 0.0;
    return rep;
  }
  bool all_jump = true;
  for (double lambda : lambdas) {
    ModularValue v = scaled_modular(x, p, lambda, cfg);
    if (v.is_indeterminate()) {
      rep.values.push_back(std::move(v));
      rep.verdict = V::Inconclusive;
      rep.reason = "indeterminate scaled modular at lambda = " + std::to_string(lambda);
      return rep;
    }
    if (v.is_finite() && v.value() <= rep.base + gap) all_jump = false;
    rep.values.push_back(std::move(v));
  }
  if (all_jump) {
    rep.verdict = V::NotRightContinuous;
    rep.limit = as_double(rep.values.back());
    rep.reason = "every probed dilation exceeds rho(x) by more than the gap";
    return rep;
  }
  std::vector<double> vals;
  for (const auto& v : rep.values) vals.push_back(as_double(v));
  const double last = vals.back();
  rep.limit = vals.size() >= 2 ? 2.0 * last - vals[vals.size() - 2] : last;
  bool monotone = std::isfinite(last);
  for (std::size_t i = 1; i < vals.size() && monotone; ++i) {
    monotone = vals[i] <= vals[i - 1] * (1.0 + 1e-12);
  }
  const double scale = std::max(1.0, rep.base);
  if (monotone && (std::abs(rep.limit - rep.base) <= tol * scale ||
                   std::abs(last - rep.base) <= tol * scale)) {
    rep.verdict = V::RightContinuous;
  } else {
    rep.reason = "dilations neither converge to rho(x) nor stay above the gap";
  }
  return rep;
}

template <class Element>
ConvergenceReport convergence_impl(const std::vector<Element>& family, const Element& limit,
                                   const ExponentSpec& p, const std::vector<double>& grid,
                                   double tol, const NormOptions& opts) {
  if (family.empty()) throw Error(ErrorCode::EmptySet, "empty family");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  std::vector<double> lambdas = grid;
  if (std::find(lambdas.begin(), lambdas.end(), 1.0) == lambdas.end()) lambdas.push_back(1.0);
  std::vector<Element> diffs;
  diffs.reserve(family.size());
  for (const auto& x : family) diffs.push_back(x - limit);

  ConvergenceReport rep;
  double lambda_max = 1.0;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid values must be positive");
    lambda_max = std::max(lambda_max, lambda);
    std::vector<double> vals;
    vals.reserve(diffs.size());
    for (std::size_t j = 0; j < diffs.size(); ++j) {
      ModularValue m = scaled_modular(diffs[j], p, lambda, opts.modular);
      vals.push_back(m.is_indeterminate() ? kInf : as_double(m));
      if (lambda == 1.0) rep.rates.emplace_back(j + 1, std::move(m));
    }
    rep.per_lambda[lambda] = settles(vals, tol);
  }
  rep.modular_converges = rep.per_lambda.at(1.0);
  for (const auto& d : diffs) {
    double n = kInf;
    try {
      n = luxemburg_norm(d, p, opts).value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotInModularSpace) throw;
    }
    rep.norms.push_back(n);
  }
  rep.norm_converges = settles(rep.norms, tol / lambda_max);
  return rep;
}

}  // namespace

// ------------------------------------------------------------------ delta_2

Delta2Verdict check_delta2(const ExponentSpec& p, const Delta2Options& opts) {
  Delta2Verdict v;
  v.p_sup = exponent_sup(p, opts.probe_window);
  v.bounded = std::isfinite(v.p_sup);
  if (!v.bounded) {
    v.witness = p.is_sequence() ? delta2_failure_witness(p, opts.witness_terms, opts.modular)
                                : function_witness(p, opts.modular);
  }
  return v;
}

Delta2Witness delta2_failure_witness(const ExponentSpec& p, std::size_t K,
                                     const ModularConfig& cfg) {
  if (K < 10) throw Error(ErrorCode::InvalidArgument, "witness needs K >= 10 terms");
  if (!p.is_sequence()) throw Error(ErrorCode::DomainMismatch, "sequence witness for a function exponent");
  if (std::isfinite(exponent_sup(p, 1'000'000))) {
    throw Error(ErrorCode::NotUnbounded, "exponent " + p.describe() + " is bounded");
  }
  Delta2Witness w;
  std::vector<std::pair<std::size_t, double>> entries;
  std::vector<double> exps;
  std::size_t n = 0;
  double prev = -kInf;
  for (std::size_t k = 1; k <= K; ++k) {
    const double need = static_cast<double>(k) * static_cast<double>(k);
    double pn;
    do {
      if (++n > kSearchCap) {
        throw Error(ErrorCode::SearchCapExceeded,
                    "no index up to 10^7 with p_n > " + std::to_string(need));
      }
      pn = p.at_index(n);
    } while (!(pn > need && pn > prev));
    prev = pn;
    w.indices.push_back(n);
    exps.push_back(pn);
    entries.emplace_back(n, std::exp(-std::log(pn) / pn));
    w.finite_bound += 1.0 / need;
  }
  auto x = SequenceVec::sparse(entries);
  w.modular = eval_seq_modular(x, p, cfg);
  for (double lambda : witness_lambdas()) {
    // log of the k-th term of rho(lambda x): p ln(lambda) - ln(p)
    const double ll = std::log(lambda);
    std::size_t k0 = 0;
    while (k0 < K && exps[k0] * ll < 1.0) ++k0;
    if (k0 + 1 >= K) {
      w.scaled.push_back({lambda, ModularValue::indeterminate(0.0, "witness too short for lambda")});
      continue;
    }
    InfiniteCertificate cert;
    cert.kind = InfiniteCertificate::Kind::TermsNondecreasing;
    cert.rule = rules::kWitnessGrowth;
    cert.first = w.indices[k0];
    cert.last = w.indices[K - 1];
    cert.nonzero_only = true;
    cert.log_term = exps[k0] * ll - std::log(exps[k0]);
    cert.delta = std::exp(cert.log_term);
    cert.parameter = lambda;
    w.scaled.push_back({lambda, ModularValue::infinite(std::move(cert))});
  }
  w.element = std::move(x);
  return w;
}

// -------------------------------------------------------- right-continuity

std::string to_string(RightContinuityReport::Verdict v) {
  switch (v) {
    case RightContinuityReport::Verdict::RightContinuous: return "right-continuous";
    case RightContinuityReport::Verdict::NotRightContinuous: return "not-right-continuous";
    case RightContinuityReport::Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> default_right_lambdas() {
  std::vector<double> l;
  for (int i = 1; i <= 20; ++i) l.push_back(1.0 + std::ldexp(1.0, -i));
  return l;
}

RightContinuityReport right_continuity_probe(const SequenceVec& x, const ExponentSpec& p,
                                             const std::vector<double>& lambdas, double tol,
                                             double gap, const ModularConfig& cfg) {
  return right_continuity_impl(x, p, lambdas, tol, gap, cfg);
}

RightContinuityReport right_continuity_probe(const PiecewiseFunction& u, const ExponentSpec& p,
                                             const std::vector<double>& lambdas, double tol,
                                             double gap, const ModularConfig& cfg) {
  return right_continuity_impl(u, p, lambdas, tol, gap, cfg);
}

// ------------------------------------------------------------- convergence

bool settles(const std::vector<double>& values, double tol) {
  if (values.empty()) return false;
  if (!(values.back() < tol)) return false;
  for (std::size_t i = values.size() / 2; i + 1 < values.size(); ++i) {
    if (!(values[i + 1] <= values[i] * (1.0 + 1e-9))) return false;
  }
  return true;
}

ConvergenceReport classify_convergence(const std::vector<SequenceVec>& family,
                                       const SequenceVec& limit, const ExponentSpec& p,
                                       const std::vector<double>& grid, double tol,
                                       const NormOptions& opts) {
  return convergence_impl(family, limit, p, grid, tol, opts);
}

ConvergenceReport classify_convergence(const std::vector<PiecewiseFunction>& family,
                                       const PiecewiseFunction& limit, const ExponentSpec& p,
                                       const std::vector<double>& grid, double tol,
                                       const NormOptions& opts) {
  return convergence_impl(family, limit, p, grid, tol, opts);
}

// -------------------------------------------------------------- truncation

TruncationReport truncation_density_check(const SequenceVec& x, const ExponentSpec& p, double tol,
                                          std::size_t max_probe, const ModularConfig& cfg) {
  const ModularValue total = eval_seq_modular(x, p, cfg);
  if (!total.is_finite()) throw Error(ErrorCode::NotFiniteModular, "rho(x) is not finite");
  TruncationReport rep;
  const auto support = x.support_max();
  for (std::size_t N = 0; N <= max_probe; ++N) {
    double d = 0.0;
    if (!support || N < *support) {
      const ModularValue m = modular_distance(x, x.prefix(N), p, cfg);
      if (!m.is_finite()) throw Error(ErrorCode::NotFiniteModular, "tail modular is not finite");
      d = m.value();
    }
    rep.trace.emplace_back(N, d);
    if (d < tol) {
      rep.N = N;
      rep.distance = d;
      rep.reached = true;
      return rep;
    }
  }
  rep.N = max_probe;
  rep.distance = rep.trace.back().second;
  return rep;
}

// ----------------------------------------------------------------- duality

double apply_functional(const SequenceVec& coeffs, const SequenceVec& x) {
  if (coeffs.has_nonzero_tail()) {
    throw Error(ErrorCode::InvalidArgument, "functional coefficients must have finite support");
  }
  double s = 0.0;
  for (const Run& r : coeffs.runs()) {
    if (r.value == 0.0) continue;
    for (std::size_t n = r.first; n <= r.last; ++n) s += r.value * x.at(n);
  }
  return s;
}

DualityReport functional_probe(const SequenceVec& coeffs,
                               const std::vector<std::vector<SequenceVec>>& families,
                               const ExponentSpec& p, double tol, std::size_t samples,
                               std::uint64_t seed, const ModularConfig& cfg) {
  DualityReport rep;
  std::vector<std::size_t> support;
  for (const Run& r : coeffs.runs()) {
    if (r.value == 0.0) continue;
    for (std::size_t n = r.first; n <= r.last; ++n) support.push_back(n);
    rep.coefficient_bound += std::abs(r.value) * static_cast<double>(r.length());
  }
  if (coeffs.has_nonzero_tail()) {
    throw Error(ErrorCode::InvalidArgument, "functional coefficients must have finite support");
  }

  auto coordinate_ok = [&](const SequenceVec& x, const ModularValue& m) {
    if (!m.is_finite() || m.value() > 1.0) return true;
    for (std::size_t M : support) {
      const double bound = std::pow(m.value() + m.error_bound(), 1.0 / p.at_index(M));
      if (std::abs(x.at(M)) > bound * (1.0 + 1e-12) + 1e-300) return false;
    }
    return true;
  };

  for (const auto& family : families) {
    FamilyTrend t;
    for (const auto& x : family) {
      const ModularValue m = eval_seq_modular(x, p, cfg);
      t.modular.push_back(m.is_indeterminate() ? kInf : as_double(m));
      t.functional.push_back(std::abs(apply_functional(coeffs, x)));
      rep.coordinate_bound = rep.coordinate_bound && coordinate_ok(x, m);
    }
    t.modularly_null = settles(t.modular, tol);
    t.functional_to_zero = settles(t.functional, tol);
    rep.families.push_back(std::move(t));
  }

  if (!support.empty()) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const std::size_t dim = support.back();
    for (std::size_t s = 0; s < samples; ++s) {
      std::vector<double> v(dim);
      for (double& c : v) c = coord(rng);
      auto x = SequenceVec::dense(v);
      ModularValue m = eval_seq_modular(x, p, cfg);
      if (!m.is_finite()) continue;
      if (m.value() > 1.0) {
        x = x.scaled(1.0 / luxemburg_norm(x, p, NormOptions{1e-12, 0x1p-60, 0x1p60, 200, cfg}).upper);
        m = eval_seq_modular(x, p, cfg);
        if (!m.is_finite() || m.value() > 1.0) continue;
      }
      rep.coordinate_bound = rep.coordinate_bound && coordinate_ok(x, m);
      rep.sampled_sup = std::max(rep.sampled_sup, std::abs(apply_functional(coeffs, x)));
    }
  }
  rep.bounded_on_ball = rep.sampled_sup <= rep.coefficient_bound * (1.0 + 1e-12);
  return rep;
}

// ------------------------------------------------------------ l^infinity

std::string to_string(LinfVerdict::Kind k) {
  switch (k) {
    case LinfVerdict::Kind::Isomorphic: return "isomorphic";
    case LinfVerdict::Kind::NotIsomorphic: return "not-isomorphic";
    case LinfVerdict::Kind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

LinfVerdict check_linf_isomorphism(const ExponentSpec& p, const ModularConfig& cfg) {
  if (!p.is_sequence()) throw Error(ErrorCode::DomainMismatch, "sequence exponent required");
  if (p.kind() == ExponentSpec::Kind::Table) {
    throw Error(ErrorCode::InvalidArgument, "finite-dimensional exponent");
  }
  LinfVerdict v;
  if (p.kind() == ExponentSpec::Kind::Affine && p.slope() == 0.0) {
    v.kind = LinfVerdict::Kind::NotIsomorphic;
    v.reason = "constant exponent: sum of lambda^p diverges for every lambda > 0";
    return v;
  }
  for (int m = 1; m <= 60; ++m) {
    const double lambda = std::ldexp(1.0, -m);
    ModularValue s = eval_seq_modular(SequenceVec::constant(lambda), p, cfg);
    if (s.is_finite()) {
      v.kind = LinfVerdict::Kind::Isomorphic;
      v.lambda = lambda;
      v.sum = std::move(s);
      return v;
    }
    if (s.is_indeterminate()) v.reason = s.reason();
  }
  v.reason = "no certified finite sum for lambda down to 2^-60" +
             (v.reason.empty() ? std::string() : ": " + v.reason);
  return v;
}

}  // namespace modtop
