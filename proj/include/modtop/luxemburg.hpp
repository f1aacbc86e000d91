#pragma once

#include <cstddef>

#include "modtop/modular.hpp"

namespace modtop {

struct NormOptions {
  /// relative bracket tolerance: the bracket ends within tol * max(1, value)
  double tol = 1e-10;
  double probe_lo = 0x1p-60;
  double probe_hi = 0x1p60;
  std::size_t max_evals = 200;
  ModularConfig modular{};
};

/// Result of inf { lambda > 0 : rho(x / lambda) <= r } by bracketing and bisection.
struct NormResult {
  enum class Membership { InSpace, NotInSpaceWithinProbe };

  /// bracket midpoint
  double value = 0.0;
  double bracket_width = 0.0;
  /// rho(x / upper) <= r was verified; rho(x / lower) > r was verified
  double lower = 0.0;
  double upper = 0.0;
  std::size_t evals_used = 0;
  Membership membership = Membership::InSpace;
};

/// Luxemburg norm ||x|| = inf { lambda > 0 : rho(x / lambda) <= 1 }.
///
/// Infinite modular values count as "above the threshold"; an Indeterminate
/// value that a bisection decision depends on throws NormUncertain. Throws
/// NotInModularSpace when rho(x / lambda) is Infinite for every probed
/// lambda up to `probe_hi`.
NormResult luxemburg_norm(const SequenceVec& x, const ExponentSpec& p, const NormOptions& opts = {});
NormResult luxemburg_norm(const PiecewiseFunction& u, const ExponentSpec& p,
                          const NormOptions& opts = {});

/// Minkowski functional of the modular ball { rho < r }, as a bracket.
NormResult minkowski_bracket(const SequenceVec& x, const ExponentSpec& p, double r,
                             const NormOptions& opts = {});
NormResult minkowski_bracket(const PiecewiseFunction& u, const ExponentSpec& p, double r,
                             const NormOptions& opts = {});

inline double minkowski_functional(const SequenceVec& x, const ExponentSpec& p, double r,
                                   const NormOptions& opts = {}) {
  return minkowski_bracket(x, p, r, opts).value;
}
inline double minkowski_functional(const PiecewiseFunction& u, const ExponentSpec& p, double r,
                                   const NormOptions& opts = {}) {
  return minkowski_bracket(u, p, r, opts).value;
}

/// Norm-modular relations for the unit ball:
///   (i)   rho(x / ||x||) <= 1, evaluated just above the bracket
///   (ii)  rho(x) <= 1  <=>  ||x|| <= 1
///   (iii) ||x|| <= 1  =>  rho(x) <= ||x||
/// (iv) needs right-continuity and is only recorded, never part of `all_pass`.
struct RelationReport {
  double norm = 0.0;
  ModularValue modular = ModularValue::finite(0.0);
  ModularValue modular_at_norm = ModularValue::finite(0.0);
  bool unit_ball_at_norm = true;
  bool ball_equivalence = true;
  bool modular_below_norm = true;
  bool strict_equivalence_observed = true;
  bool all_pass = true;
};

RelationReport verify_norm_modular_relations(const SequenceVec& x, const ExponentSpec& p,
                                             double tol, const NormOptions& opts = {});
RelationReport verify_norm_modular_relations(const PiecewiseFunction& u, const ExponentSpec& p,
                                             double tol, const NormOptions& opts = {});

}  // namespace modtop
