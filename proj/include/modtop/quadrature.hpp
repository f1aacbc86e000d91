#pragma once

#include <cstddef>
#include <functional>

namespace modtop::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  std::size_t cells = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod (7/15) bisection on [a, b]: the cell with
/// the largest error estimate is split until the summed estimate drops below
/// `abs_tol` or `cell_budget` cells are in use.
Result integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 std::size_t cell_budget);

/// Integral over (a, b] of a function that may be singular or slowly varying
/// at `a`. Cells [a + w/2, a + w] with w = (b-a), (b-a)/2, ... are integrated
/// one by one; the left remainder (a, a + w) is dropped once
/// `left_bound(w)` <= abs_tol / 4 and that bound is added to the error.
Result integrate_graded_left(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, std::size_t cell_budget,
                             const std::function<double(double)>& left_bound);

}  // namespace modtop::quad
