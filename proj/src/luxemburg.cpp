#include "modtop/luxemburg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "modtop/error.hpp"

namespace modtop {

namespace {

// Bisection for inf { lambda : rho_at(lambda) <= threshold }, rho_at(lambda) = rho(x / lambda)
// being nonincreasing in lambda.
NormResult bisect(const std::function<ModularValue(double)>& rho_at, double threshold,
                  const NormOptions& opts) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  NormResult out;
  bool saw_finite = false;
  auto above = [&](double lambda) {
    if (out.evals_used >= opts.max_evals) {
      throw Error(ErrorCode::NormUncertain, "modular evaluation budget exhausted");
    }
    ++out.evals_used;
    const ModularValue m = rho_at(lambda);
    if (m.is_indeterminate()) {
      throw Error(ErrorCode::NormUncertain, "indeterminate modular at lambda = " +
                                                std::to_string(lambda) + ": " + m.reason());
    }
    if (m.is_infinite()) return true;
    saw_finite = true;
    return m.value() > threshold;
  };

  double lo = 1.0, hi = 1.0;
  if (above(1.0)) {
    hi = 2.0;
    while (above(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > opts.probe_hi) {
        if (!saw_finite) {
          throw Error(ErrorCode::NotInModularSpace,
                      "rho(x / lambda) is infinite for every probed lambda");
        }
        out.membership = NormResult::Membership::NotInSpaceWithinProbe;
        out.lower = lo;
        out.upper = std::numeric_limits<double>::infinity();
        out.value = std::numeric_limits<double>::infinity();
        out.bracket_width = std::numeric_limits<double>::infinity();
        return out;
      }
    }
  } else {
    lo = 0.5;
    while (!above(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo < opts.probe_lo) {
        lo = 0.0;
        break;
      }
    }
  }
  while (hi - lo > opts.tol * std::max(1.0, 0.5 * (lo + hi))) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (above(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.lower = lo;
  out.upper = hi;
  out.value = 0.5 * (lo + hi);
  out.bracket_width = hi - lo;
  return out;
}

template <class Element>
NormResult minkowski_impl(const Element& x, const ExponentSpec& p, double r,
                          const NormOptions& opts) {
  if (x.is_zero()) return NormResult{};
  return bisect([&](double lambda) { return scaled_modular(x, p, 1.0 / lambda, opts.modular); }, r,
                opts);
}

template <class Element>
RelationReport relations_impl(const Element& x, const ExponentSpec& p, double tol,
                              const NormOptions& opts) {
  RelationReport rep;
  rep.modular = eval_modular(x, p, opts.modular);
  if (rep.modular.is_indeterminate()) {
    throw Error(ErrorCode::NormUncertain, "modular of x is indeterminate: " + rep.modular.reason());
  }
  if (x.is_zero()) return rep;
  const NormResult nr = minkowski_impl(x, p, 1.0, opts);
  rep.norm = nr.value;
  const bool rho_le_one = rep.modular.is_finite() && rep.modular.value() <= 1.0 + tol;
  const bool rho_lt_one = rep.modular.is_finite() && rep.modular.value() < 1.0;
  const bool near_boundary =
      std::abs(rep.norm - 1.0) <= tol ||
      (rep.modular.is_finite() && std::abs(rep.modular.value() - 1.0) <= tol);

  // (i) left-continuity: rho(x / lambda) <= 1 for every lambda above the infimum
  if (std::isfinite(nr.upper)) {
    rep.modular_at_norm = scaled_modular(x, p, 1.0 / (nr.value + nr.bracket_width), opts.modular);
    rep.unit_ball_at_norm =
        rep.modular_at_norm.is_finite() && rep.modular_at_norm.value() <= 1.0 + tol;
  } else {
    rep.modular_at_norm = ModularValue::indeterminate(0.0, "norm beyond probe range");
    rep.unit_ball_at_norm = false;
  }
  // (ii)
  rep.ball_equivalence = (rho_le_one == (rep.norm <= 1.0 + tol)) || near_boundary;
  // (iii)
  if (rep.norm <= 1.0 + tol) {
    rep.modular_below_norm = rep.modular.is_finite() && rep.modular.value() <= rep.norm + tol;
  }
  // (iv), recorded only
  rep.strict_equivalence_observed = rho_lt_one == (rep.norm < 1.0);
  rep.all_pass = rep.unit_ball_at_norm && rep.ball_equivalence && rep.modular_below_norm;
  return rep;
}

}  // namespace

NormResult luxemburg_norm(const SequenceVec& x, const ExponentSpec& p, const NormOptions& opts) {
  return minkowski_impl(x, p, 1.0, opts);
}

NormResult luxemburg_norm(const PiecewiseFunction& u, const ExponentSpec& p,
                          const NormOptions& opts) {
  return minkowski_impl(u, p, 1.0, opts);
}

NormResult minkowski_bracket(const SequenceVec& x, const ExponentSpec& p, double r,
                             const NormOptions& opts) {
  return minkowski_impl(x, p, r, opts);
}

NormResult minkowski_bracket(const PiecewiseFunction& u, const ExponentSpec& p, double r,
                             const NormOptions& opts) {
  return minkowski_impl(u, p, r, opts);
}

RelationReport verify_norm_modular_relations(const SequenceVec& x, const ExponentSpec& p,
                                             double tol, const NormOptions& opts) {
  return relations_impl(x, p, tol, opts);
}

RelationReport verify_norm_modular_relations(const PiecewiseFunction& u, const ExponentSpec& p,
                                             double tol, const NormOptions& opts) {
  return relations_impl(u, p, tol, opts);
}

}  // namespace modtop
