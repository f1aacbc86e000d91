#include "modtop/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace modtop::quad {

namespace {

// Kronrod 15-point abscissae on [-1, 1] (nonnegative half) and weights; the
// odd entries are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Cell {
  double a, b, value, error;
  bool operator<(const Cell& o) const { return error < o.error; }
};

Cell gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  double error = std::abs((kronrod - gauss) * half);
  // floor at a few ulps of the cell magnitude
  error = std::max(error, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(value));
  return {a, b, value, error};
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 std::size_t cell_budget) {
  Result out;
  if (!(b > a)) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Cell> heap;
  Cell first = gauss_kronrod(f, a, b);
  double total = first.value;
  double error = first.error;
  heap.push(first);
  out.cells = 1;
  while (error > abs_tol && out.cells < cell_budget) {
    Cell worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // cell no longer splittable
    heap.pop();
    Cell left = gauss_kronrod(f, worst.a, mid);
    Cell right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++out.cells;
  }
  // recompute sums from scratch to drop drift from incremental updates
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = error;
  out.converged = std::isfinite(total) && error <= abs_tol;
  return out;
}

Result integrate_graded_left(const std::function<double(double)>& f, double a, double b,
                             double abs_tol, std::size_t cell_budget,
                             const std::function<double(double)>& left_bound) {
  Result out;
  out.converged = true;
  double width = b - a;
  // cells get a geometric share of the tolerance so the total stays below abs_tol / 2
  double cell_tol = abs_tol / 4.0;
  while (left_bound(width) > abs_tol / 4.0) {
    if (out.cells >= cell_budget || width < 1e-300) {
      out.converged = false;
      break;
    }
    const Result part = integrate(f, a + 0.5 * width, a + width, cell_tol, cell_budget - out.cells);
    out.value += part.value;
    out.error += part.error;
    out.cells += part.cells;
    out.converged = out.converged && part.converged;
    width *= 0.5;
    cell_tol *= 0.5;
  }
  out.error += left_bound(width);
  return out;
}

}  // namespace modtop::quad
