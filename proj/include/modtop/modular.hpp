#pragma once

#include <cstddef>
#include <span>

#include "modtop/exponent.hpp"
#include "modtop/function.hpp"
#include "modtop/modular_value.hpp"
#include "modtop/sequence.hpp"

namespace modtop {

struct ModularConfig {
  /// absolute tolerance for quadrature and certified tail sums
  double abs_tol = 1e-8;
  /// terms with log-magnitude above this are treated as infinite
  double overflow_log_cap = 690.0;
  std::size_t cell_budget = 1'000'000;
  /// partial-summation budget for tails against Custom exponents
  std::size_t term_cap = 10'000'000;
  /// a tail whose term ratio stays >= 1 - 1e-12 for this many terms is Indeterminate
  std::size_t ratio_window = 10'000;

  /// Defaults with the overflow cap taken from MODTOP_CAP when set.
  static ModularConfig from_env();
};

/// rho_p(x) = sum_n |x_n|^(p_n).
ModularValue eval_seq_modular(const SequenceVec& x, const ExponentSpec& p,
                              const ModularConfig& cfg = {});
/// rho_p(u) = integral over the domain of |u(x)|^(p(x)).
ModularValue eval_fun_modular(const PiecewiseFunction& u, const ExponentSpec& p,
                              const ModularConfig& cfg = {});

inline ModularValue eval_modular(const SequenceVec& x, const ExponentSpec& p,
                                 const ModularConfig& cfg = {}) {
  return eval_seq_modular(x, p, cfg);
}
inline ModularValue eval_modular(const PiecewiseFunction& u, const ExponentSpec& p,
                                 const ModularConfig& cfg = {}) {
  return eval_fun_modular(u, p, cfg);
}

/// rho(lambda x), lambda > 0.
ModularValue scaled_modular(const SequenceVec& x, const ExponentSpec& p, double lambda,
                            const ModularConfig& cfg = {});
ModularValue scaled_modular(const PiecewiseFunction& u, const ExponentSpec& p, double lambda,
                            const ModularConfig& cfg = {});

/// rho(x - y)
ModularValue modular_distance(const SequenceVec& x, const SequenceVec& y, const ExponentSpec& p,
                              const ModularConfig& cfg = {});
ModularValue modular_distance(const PiecewiseFunction& u, const PiecewiseFunction& v,
                              const ExponentSpec& p, const ModularConfig& cfg = {});

/// sup of rho(a - b) over pairs of a finite nonempty set.
ModularValue modular_diameter(std::span<const SequenceVec> set, const ExponentSpec& p,
                              const ModularConfig& cfg = {});
ModularValue modular_diameter(std::span<const PiecewiseFunction> set, const ExponentSpec& p,
                              const ModularConfig& cfg = {});

/// Re-derives an Infinite certificate from the vector it was issued for:
/// recomputes the flagged window of terms, the overflowing term, or the
/// hypotheses of the named analytic rule.
bool recheck_certificate(const SequenceVec& x, const ExponentSpec& p,
                         const InfiniteCertificate& cert, const ModularConfig& cfg = {});
bool recheck_certificate(const PiecewiseFunction& u, const ExponentSpec& p,
                         const InfiniteCertificate& cert, const ModularConfig& cfg = {});

/// log |a|^p, -inf for a == 0.
double log_term(double a, double p);

namespace rules {
inline constexpr const char* kTailAtLeastOne = "tail-constant-abs-ge-1";
inline constexpr const char* kConstantExponentTail = "bounded-exponent-constant-tail";
inline constexpr const char* kExpReciprocalHarmonic = "exp-reciprocal-dominates-harmonic";
inline constexpr const char* kHarmonicCells = "harmonic-cells-dominate-harmonic-series";
inline constexpr const char* kOverflow = "overflow-cap";
}  // namespace rules

}  // namespace modtop
