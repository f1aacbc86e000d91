#include "modtop/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "modtop/error.hpp"

namespace modtop {

namespace {

// |g|^p in the log domain
double power(double g, double p) {
  if (g == 0.0) return 0.0;
  return std::exp(p * std::log(std::abs(g)));
}

// p |g|^(p-2) g
double flux(double g, double p) {
  if (g == 0.0) return 0.0;
  return std::copysign(p * std::exp((p - 1.0) * std::log(std::abs(g))), g);
}

void check_size(const EnergyProblem& prob, std::span<const double> u) {
  if (u.size() != prob.unknowns()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(prob.unknowns()) +
                                                  " interior values, got " +
                                                  std::to_string(u.size()));
  }
}

double node(std::span<const double> u, std::size_t i, std::size_t n) {
  return (i == 0 || i == n) ? 0.0 : u[i - 1];
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

EnergyProblem assemble_energy(std::size_t n, const ExponentSpec& p, std::vector<double> phi_nodes) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two cells");
  if (phi_nodes.size() != n + 1) {
    throw Error(ErrorCode::DimensionMismatch, "boundary datum needs n+1 node values");
  }
  if (p.kind() == ExponentSpec::Kind::Table) {
    throw Error(ErrorCode::InvalidArgument, "table exponents have no values on (0,1)");
  }
  if (p.kind() == ExponentSpec::Kind::Custom && p.is_sequence()) {
    throw Error(ErrorCode::InvalidArgument, "custom sequence exponents have no values on (0,1)");
  }
  if (auto s = p.known_supremum(); s && std::isinf(*s)) {
    throw Error(ErrorCode::InvalidArgument, "unbounded exponent " + p.describe() +
                                                " is excluded from the solver");
  }
  EnergyProblem prob;
  prob.n = n;
  prob.h = 1.0 / static_cast<double>(n);
  prob.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mid = (static_cast<double>(i) + 0.5) * prob.h;
    if (p.domain() && !(p.domain()->lo <= mid && mid <= p.domain()->hi)) {
      throw Error(ErrorCode::DomainMismatch, "exponent domain does not cover (0,1)");
    }
    const double v = p.at(mid);
    if (!(v >= 2.0)) {
      throw Error(ErrorCode::ExponentBelowTwo,
                  "p(" + std::to_string(mid) + ") = " + std::to_string(v) + " < 2");
    }
    prob.p[i] = v;
  }
  for (double v : phi_nodes) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "boundary datum is not finite");
  }
  prob.phi = std::move(phi_nodes);
  return prob;
}

EnergyProblem assemble_energy(std::size_t n, const ExponentSpec& p,
                              const std::function<double(double)>& phi) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "need at least two cells");
  std::vector<double> nodes(n + 1);
  for (std::size_t i = 0; i <= n; ++i) nodes[i] = phi(static_cast<double>(i) / static_cast<double>(n));
  return assemble_energy(n, p, std::move(nodes));
}

std::vector<double> cell_slopes(const EnergyProblem& prob, std::span<const double> u) {
  check_size(prob, u);
  std::vector<double> g(prob.n);
  for (std::size_t i = 0; i < prob.n; ++i) {
    const double w0 = node(u, i, prob.n) - prob.phi[i];
    const double w1 = node(u, i + 1, prob.n) - prob.phi[i + 1];
    g[i] = (w1 - w0) / prob.h;
  }
  return g;
}

double energy_value(const EnergyProblem& prob, std::span<const double> u) {
  const auto g = cell_slopes(prob, u);
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < prob.n; ++i) {
    const double term = prob.h * power(g[i], prob.p[i]);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

std::vector<double> energy_gradient(const EnergyProblem& prob, std::span<const double> u) {
  const auto g = cell_slopes(prob, u);
  std::vector<double> grad(prob.unknowns());
  for (std::size_t j = 1; j < prob.n; ++j) {
    grad[j - 1] = flux(g[j - 1], prob.p[j - 1]) - flux(g[j], prob.p[j]);
  }
  return grad;
}

double energy_change(const EnergyProblem& prob, std::span<const double> u,
                     std::span<const double> d, double t) {
  check_size(prob, d);
  const auto g = cell_slopes(prob, u);
  double total = 0.0;
  for (std::size_t i = 0; i < prob.n; ++i) {
    const double b = g[i];
    const double delta = t * (node(d, i + 1, prob.n) - node(d, i, prob.n)) / prob.h;
    const double a = b + delta;
    const double pi = prob.p[i];
    double diff;
    if (b == 0.0) {
      diff = power(a, pi);
    } else if (a != 0.0 && std::signbit(a) == std::signbit(b)) {
      // |a|^p - |b|^p = |b|^p (exp(p log(1 + delta/b)) - 1)
      diff = power(b, pi) * std::expm1(pi * std::log1p(delta / b));
    } else {
      diff = power(a, pi) - power(b, pi);
    }
    total += prob.h * diff;
  }
  return total;
}

double gradient_modular_distance(const EnergyProblem& prob, std::span<const double> u,
                                 std::span<const double> v) {
  const auto gu = cell_slopes(prob, u);
  const auto gv = cell_slopes(prob, v);
  double s = 0.0;
  for (std::size_t i = 0; i < prob.n; ++i) s += prob.h * power(gu[i] - gv[i], prob.p[i]);
  return s;
}

SolveTrace minimize_energy(const EnergyProblem& prob, const SolveOptions& opts) {
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  std::vector<double> u = opts.initial.empty() ? std::vector<double>(prob.unknowns(), 0.0)
                                               : opts.initial;
  check_size(prob, u);

  SolveTrace trace;
  std::vector<std::pair<std::size_t, std::vector<double>>> snapshots;
  std::size_t stride = 1;
  auto snapshot = [&](std::size_t k) {
    if (k % stride != 0) return;
    snapshots.emplace_back(k, u);
    if (snapshots.size() > opts.max_snapshots) {
      std::vector<std::pair<std::size_t, std::vector<double>>> kept;
      for (std::size_t i = 0; i < snapshots.size(); i += 2) kept.push_back(std::move(snapshots[i]));
      snapshots = std::move(kept);
      stride *= 2;
    }
  };

  double step = 1.0;
  double energy = energy_value(prob, u);
  std::vector<double> grad = energy_gradient(prob, u);
  std::vector<double> dir(grad.size());
  for (std::size_t k = 0;; ++k) {
    const double gi = sup_norm(grad);
    trace.iterates.push_back({k, energy, gi, k == 0 ? 0.0 : step});
    snapshot(k);
    if (gi <= opts.tol) {
      trace.converged = true;
      break;
    }
    if (k >= opts.max_iter) {
      trace.max_iter_exceeded = true;
      break;
    }
    double g2 = 0.0;
    for (std::size_t j = 0; j < grad.size(); ++j) {
      dir[j] = -grad[j];
      g2 += grad[j] * grad[j];
    }
    double t = 2.0 * step;
    bool accepted = false;
    for (int halvings = 0; halvings < 200; ++halvings, t *= 0.5) {
      if (energy_change(prob, u, dir, t) <= -opts.armijo * t * g2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      trace.stalled = true;
      break;
    }
    step = t;
    for (std::size_t j = 0; j < u.size(); ++j) u[j] += t * dir[j];
    energy = energy_value(prob, u);
    grad = energy_gradient(prob, u);
  }
  if (snapshots.empty() || snapshots.back().first != trace.iterates.back().iteration) {
    snapshots.emplace_back(trace.iterates.back().iteration, u);
  }
  for (const auto& [k, uk] : snapshots) {
    trace.modular_distance.emplace_back(k, gradient_modular_distance(prob, uk, u));
  }
  trace.final_u = std::move(u);
  return trace;
}

ResidualReport residual_check(const EnergyProblem& prob, std::span<const double> u, double tol) {
  const auto grad = energy_gradient(prob, u);
  ResidualReport r;
  r.max_residual = sup_norm(grad) / prob.h;
  r.pass = r.max_residual <= tol;
  return r;
}

}  // namespace modtop
