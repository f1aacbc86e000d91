#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "modtop/exponent.hpp"

namespace modtop {

/// Discrete energy F(u) = sum_i h |g_i|^(p_i) on n uniform cells of (0,1),
/// g_i the forward slope of u - phi on cell i. The unknowns are the n-1
/// interior node values; u vanishes at both endpoints.
struct EnergyProblem {
  std::size_t n = 0;
  double h = 0.0;
  /// exponent at each cell midpoint, all >= 2
  std::vector<double> p;
  /// boundary datum at the n+1 nodes
  std::vector<double> phi;

  std::size_t unknowns() const { return n - 1; }
};

/// Throws ExponentBelowTwo if some midpoint exponent is below 2, and
/// InvalidArgument for n < 2, table exponents or unbounded p.
EnergyProblem assemble_energy(std::size_t n, const ExponentSpec& p,
                              const std::function<double(double)>& phi);
EnergyProblem assemble_energy(std::size_t n, const ExponentSpec& p, std::vector<double> phi_nodes);

/// g_i for i = 0..n-1
std::vector<double> cell_slopes(const EnergyProblem& prob, std::span<const double> u);

double energy_value(const EnergyProblem& prob, std::span<const double> u);

/// Interior node j receives p_{j-1}|g_{j-1}|^(p-2) g_{j-1} - p_j |g_j|^(p-2) g_j.
std::vector<double> energy_gradient(const EnergyProblem& prob, std::span<const double> u);

/// F(u + t d) - F(u), computed cell by cell without cancellation between
/// the two energies.
double energy_change(const EnergyProblem& prob, std::span<const double> u,
                     std::span<const double> d, double t);

/// sum_i h |g_i(u) - g_i(v)|^(p_i)
double gradient_modular_distance(const EnergyProblem& prob, std::span<const double> u,
                                 std::span<const double> v);

struct SolveOptions {
  double tol = 1e-8;
  std::size_t max_iter = 2'000'000;
  /// starting interior values; zero when empty
  std::vector<double> initial;
  std::size_t max_snapshots = 2048;
  double armijo = 1e-4;
};

struct IterateRecord {
  std::size_t iteration = 0;
  double energy = 0.0;
  double grad_inf = 0.0;
  double step = 0.0;
};

struct SolveTrace {
  std::vector<IterateRecord> iterates;
  std::vector<double> final_u;
  /// (iteration, gradient modular distance to the final iterate) at thinned snapshots
  std::vector<std::pair<std::size_t, double>> modular_distance;
  bool converged = false;
  bool max_iter_exceeded = false;
  /// the line search could not decrease F any further
  bool stalled = false;
};

/// Gradient descent with Armijo backtracking (halving), each search starting
/// from twice the previous accepted step.
SolveTrace minimize_energy(const EnergyProblem& prob, const SolveOptions& opts = {});

struct ResidualReport {
  /// gradient inf-norm divided by h
  double max_residual = 0.0;
  bool pass = false;
};

ResidualReport residual_check(const EnergyProblem& prob, std::span<const double> u, double tol);

}  // namespace modtop
