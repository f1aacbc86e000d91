#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "modtop/luxemburg.hpp"
#include "modtop/modular.hpp"

namespace modtop {

namespace rules {
/// terms lambda^(p_k) / p_k with p_k increasing past 1 / ln(lambda) never decrease
inline constexpr const char* kWitnessGrowth = "witness-terms-lambda-pow-p-over-p";
/// entries of modulus one on an infinite index set each contribute one
inline constexpr const char* kUnitEntries = "unit-entries-on-infinite-support";
}  // namespace rules

// ------------------------------------------------------------------ delta_2

struct ScaledVerdict {
  double lambda = 1.0;
  ModularValue value = ModularValue::finite(0.0);
};

/// A vector with finite modular whose every dilation lambda > 1 has infinite
/// modular. Sequence witnesses are the first K entries of an infinite sparse
/// vector; the scaled certificates speak about the full vector and recheck
/// against the truncation.
struct Delta2Witness {
  std::variant<SequenceVec, PiecewiseFunction> element;
  /// n_k, sequences only
  std::vector<std::size_t> indices;
  ModularValue modular = ModularValue::finite(0.0);
  /// analytic upper bound for the modular of the full witness
  double finite_bound = 0.0;
  std::vector<ScaledVerdict> scaled;
};

struct Delta2Verdict {
  bool bounded = true;
  /// +inf when unbounded
  double p_sup = 0.0;
  std::optional<Delta2Witness> witness;
};

struct Delta2Options {
  /// indices (or sample points) inspected for Custom exponents
  std::size_t probe_window = 1'000'000;
  std::size_t witness_terms = 50;
  ModularConfig modular{};
};

/// Throws UndeclaredGrowth when a Custom exponent carries no growth
/// declaration and its probe still increases near the end of the window.
Delta2Verdict check_delta2(const ExponentSpec& p, const Delta2Options& opts = {});

/// Sparse vector with entries p_{n_k}^(-1/p_{n_k}) at the minimal strictly
/// increasing n_k with p_{n_k} > k^2 and p_{n_k} increasing, k = 1..K.
/// Throws NotUnbounded for bounded p and SearchCapExceeded past index 10^7.
Delta2Witness delta2_failure_witness(const ExponentSpec& p, std::size_t K,
                                     const ModularConfig& cfg = {});

inline const std::vector<double>& witness_lambdas() {
  static const std::vector<double> l = {1.1, 1.5, 2.0};
  return l;
}

// -------------------------------------------------------- right-continuity

struct RightContinuityReport {
  enum class Verdict { RightContinuous, NotRightContinuous, Inconclusive };
  Verdict verdict = Verdict::Inconclusive;
  double base = 0.0;
  /// extrapolated limit of rho(lambda x) as lambda decreases to 1
  double limit = 0.0;
  std::vector<double> lambdas;
  std::vector<ModularValue> values;
  std::string reason;
};

std::string to_string(RightContinuityReport::Verdict v);

/// 1 + 2^-i, i = 1..20
std::vector<double> default_right_lambdas();

RightContinuityReport right_continuity_probe(const SequenceVec& x, const ExponentSpec& p,
                                             const std::vector<double>& lambdas = default_right_lambdas(),
                                             double tol = 1e-8, double gap = 1e-3,
                                             const ModularConfig& cfg = {});
RightContinuityReport right_continuity_probe(const PiecewiseFunction& u, const ExponentSpec& p,
                                             const std::vector<double>& lambdas = default_right_lambdas(),
                                             double tol = 1e-8, double gap = 1e-3,
                                             const ModularConfig& cfg = {});

// ------------------------------------------------------------- convergence

struct ConvergenceReport {
  bool modular_converges = false;
  std::map<double, bool> per_lambda;
  bool norm_converges = false;
  /// (index, rho(x_j - limit)), indices 1-based
  std::vector<std::pair<std::size_t, ModularValue>> rates;
  /// ||x_j - limit||, +inf outside the space
  std::vector<double> norms;
};

inline const std::vector<double>& default_lambda_grid() {
  static const std::vector<double> g = {0.25, 0.5, 1.0, 2.0, 4.0};
  return g;
}

/// A finite prefix converges when its last value is below tol and the values
/// do not increase over the trailing half. Norm convergence is judged against
/// tol / max(1, max lambda) so that it implies convergence at every grid point.
ConvergenceReport classify_convergence(const std::vector<SequenceVec>& family,
                                       const SequenceVec& limit, const ExponentSpec& p,
                                       const std::vector<double>& grid = default_lambda_grid(),
                                       double tol = 1e-6, const NormOptions& opts = {});
ConvergenceReport classify_convergence(const std::vector<PiecewiseFunction>& family,
                                       const PiecewiseFunction& limit, const ExponentSpec& p,
                                       const std::vector<double>& grid = default_lambda_grid(),
                                       double tol = 1e-6, const NormOptions& opts = {});

/// last < tol and nonincreasing over the trailing half
bool settles(const std::vector<double>& values, double tol);

// --------------------------------------------------------------- scenarios

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  std::optional<ModularValue> modular;
  std::string detail;
};

struct BallWitness {
  std::string scenario;
  double delta = 0.0;
  std::string center;
  std::string inner_point;
  std::size_t approximants = 0;
  std::vector<Check> checks;
  bool passed() const;
};

/// Scenarios: "seq-pn-equals-n", "seq-general-unbounded", "Lp-reciprocal".
BallWitness ball_interior_witness(const std::string& scenario, double delta,
                                  const ModularConfig& cfg = {});

struct TruncationReport {
  std::size_t N = 0;
  double distance = 0.0;
  bool reached = false;
  /// (N, rho(x - prefix_N(x)))
  std::vector<std::pair<std::size_t, double>> trace;
};

/// Minimal N with rho(x - prefix_N(x)) < tol, probing N = 0, 1, 2, ... up to
/// `max_probe`. Throws NotFiniteModular unless rho(x) is Finite.
TruncationReport truncation_density_check(const SequenceVec& x, const ExponentSpec& p, double tol,
                                          std::size_t max_probe = 1'000'000,
                                          const ModularConfig& cfg = {});

struct FamilyTrend {
  std::vector<double> functional;
  std::vector<double> modular;
  bool modularly_null = false;
  bool functional_to_zero = false;
};

struct DualityReport {
  std::vector<FamilyTrend> families;
  /// |x_M| <= rho(x)^(1/p_M) on every inspected point with rho(x) <= 1
  bool coordinate_bound = true;
  /// sup |Lambda| over sampled points of { rho <= 1 }
  double sampled_sup = 0.0;
  /// sum |c_j|, the bound from |x_j| <= 1 on the unit modular ball
  double coefficient_bound = 0.0;
  bool bounded_on_ball = true;
};

/// Lambda(x) = sum c_j x_j for finite-support coefficients.
double apply_functional(const SequenceVec& coeffs, const SequenceVec& x);

DualityReport functional_probe(const SequenceVec& coeffs,
                               const std::vector<std::vector<SequenceVec>>& families,
                               const ExponentSpec& p, double tol = 1e-6,
                               std::size_t samples = 50, std::uint64_t seed = 1,
                               const ModularConfig& cfg = {});

struct LinfVerdict {
  enum class Kind { Isomorphic, NotIsomorphic, Inconclusive };
  Kind kind = Kind::Inconclusive;
  double lambda = 0.0;
  ModularValue sum = ModularValue::finite(0.0);
  std::string reason;
};

std::string to_string(LinfVerdict::Kind k);

/// Searches lambda = 2^-m, m = 1..60, for a certified finite sum of lambda^(p_n).
LinfVerdict check_linf_isomorphism(const ExponentSpec& p, const ModularConfig& cfg = {});

struct ScenarioReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  /// emitted numbers in a fixed order
  std::vector<std::pair<std::string, double>> values;
  bool passed() const;
};

const std::vector<std::string>& scenario_names();

/// Throws UnknownScenario for names outside `scenario_names()`.
ScenarioReport run_counterexample(const std::string& name, std::uint64_t seed = 1,
                                  const ModularConfig& cfg = {});

}  // namespace modtop
