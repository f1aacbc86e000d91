// Acceptance run: one PASS/FAIL line per criterion, each with its runtime
// against the allowed budget. Exit status is nonzero if any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "modtop/cli/runner.hpp"
#include "modtop/diagnostics.hpp"
#include "modtop/dirichlet.hpp"
#include "modtop/properties.hpp"

using namespace modtop;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double upper(const ModularValue& m) {
  return m.is_finite() ? m.value() + m.error_bound() : std::numeric_limits<double>::infinity();
}

bool certified_infinite(const auto& x, const ExponentSpec& p, const ModularValue& m) {
  return m.is_infinite() && recheck_certificate(x, p, m.certificate());
}

void boundary(Outcome& o) {
  const auto p = ExponentSpec::reciprocal({0.0, 0.5});
  const auto one = PiecewiseFunction::constant({0.0, 0.5}, 1.0);
  const auto m = eval_fun_modular(one, p);
  const auto n = luxemburg_norm(one, p);
  o.require(m.is_finite() && std::abs(m.value() - 0.5) <= 1e-6, "rho(1) = 0.5 within 1e-6");
  o.require(std::abs(n.value - 1.0) <= 1e-4, "||1|| = 1 within 1e-4");
  for (double lambda : {1.05, 1.1, 1.5}) {
    const auto s = scaled_modular(one, p, lambda);
    o.require(s.is_infinite() &&
                  s.certificate().kind == InfiniteCertificate::Kind::AnalyticComparison &&
                  certified_infinite(one.scaled(lambda), p, s),
              "rho(" + std::to_string(lambda) + " * 1) infinite by analytic comparison");
  }
  o.detail << "rho(1)=" << m.lower_bound() << " ||1||=" << n.value;
}

void delta2(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> expo(1.0, 8.0);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  int bounded = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> v(dim(rng));
    for (double& x : v) x = expo(rng);
    if (check_delta2(ExponentSpec::table(v)).bounded) ++bounded;
  }
  o.require(bounded == 20, "20 random tables bounded");
  const auto pn = ExponentSpec::affine(1.0, 0.0);
  o.require(!check_delta2(pn).bounded, "p_n = n unbounded");
  o.require(!check_delta2(ExponentSpec::reciprocal({0.0, 1.0})).bounded, "p(x) = 1/x unbounded");

  const auto w = delta2_failure_witness(pn, 50);
  const double bound = std::numbers::pi * std::numbers::pi / 6 + 1e-3;
  o.require(w.modular.is_finite() && upper(w.modular) <= bound, "witness modular <= pi^2/6 + 1e-3");
  const auto& x = std::get<SequenceVec>(w.element);
  bool at15 = false;
  for (const auto& s : w.scaled) {
    if (s.lambda == 1.5) at15 = certified_infinite(x.scaled(1.5), pn, s.value);
  }
  o.require(at15, "witness modular at lambda = 1.5 certified infinite");
  o.detail << "tables bounded " << bounded << "/20, witness rho=" << w.modular.lower_bound();
}

void ball_chain(Outcome& o) {
  const auto p = ExponentSpec::affine(1.0, 0.0);
  const auto x = SequenceVec::constant(0.5);
  const auto one = SequenceVec::constant(1.0);
  double worst = 0.0;
  bool all_infinite = true;
  std::vector<SequenceVec> family;
  for (std::size_t n = 1; n <= 40; ++n) {
    const auto xn = x.prefix(n);
    family.push_back(xn);
    const auto m = eval_seq_modular(x - xn, p);
    const double expect = std::ldexp(1.0, -static_cast<int>(n));
    worst = std::max(worst, m.is_finite() ? std::abs(m.value() - expect) / expect : INFINITY);
    all_infinite = all_infinite && certified_infinite(xn - one, p, eval_seq_modular(xn - one, p));
  }
  o.require(worst <= 1e-12, "rho(x - x_n) = 2^-n to 1e-12 relative");
  o.require(all_infinite, "rho(x_n - 1) infinite for every n");
  const auto cr = classify_convergence(family, x, p);
  o.require(cr.modular_converges, "modular convergence");
  o.require(!cr.per_lambda.at(2.0), "no convergence at lambda = 2");
  o.require(!cr.norm_converges, "no norm convergence");
  o.detail << "max rel err " << worst << ", last norm " << cr.norms.back();
}

void lp_bounds(Outcome& o) {
  const auto p = ExponentSpec::reciprocal({0.0, 1.0});
  const auto v = PiecewiseFunction::catalog_v();
  for (double eps : {0.25, 0.5}) {
    const auto m = eval_fun_modular(v.scaled(1 - eps), p);
    o.require(upper(m) < (1 - eps) / eps, "rho((1-eps) v) < (1-eps)/eps at eps=" + std::to_string(eps));
    o.detail << "rho(" << 1 - eps << "v)=" << m.lower_bound() << " ";
  }
  const double eps = 0.5;
  for (std::size_t k : {5, 10, 20}) {
    const auto vk = PiecewiseFunction::harmonic_cells(SequenceVec::constant(1.0).prefix(k));
    const auto m = eval_fun_modular((v - vk).scaled(eps), p);
    const double bound = std::pow(eps, static_cast<double>(k + 1)) / (1 - eps);
    o.require(upper(m) < bound, "rho(eps(v - v_k)) < eps^(k+1)/(1-eps) at k=" + std::to_string(k));
    o.detail << "k=" << k << ":" << m.lower_bound() << "<" << bound << " ";
  }
}

void report_suite(Outcome& o, const std::string& name) {
  const auto rep = run_property_suite(name, 1);
  for (const auto& c : rep.checks) {
    o.require(c.passed, c.name);
    o.detail << c.name << "=" << c.value << " ";
  }
}

void finite_dim(Outcome& o) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> expo(1.0, 6.0);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  double worst_ratio = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = dim(rng);
    std::vector<double> pv(d), base(d);
    for (double& x : pv) x = expo(rng);
    for (double& x : base) x = coord(rng);
    const auto p = ExponentSpec::table(pv);
    const double psup = *std::max_element(pv.begin(), pv.end());
    std::vector<double> rho, rho2;
    for (int j = 1; j <= 60; ++j) {
      const auto xj = SequenceVec::dense(base).scaled(std::pow(2.0, -j / 2.0));
      const auto m = eval_seq_modular(xj, p);
      const auto m2 = eval_seq_modular(xj.scaled(2.0), p);
      if (!m.is_finite() || !m2.is_finite()) {
        o.require(false, "finite modulars");
        return;
      }
      rho.push_back(m.value());
      rho2.push_back(m2.value());
      if (m.value() > 0) worst_ratio = std::max(worst_ratio, m2.value() / m.value() / std::pow(2.0, psup));
    }
    o.require(settles(rho, 1e-6), "family modularly null");
    o.require(settles(rho2, 1e-6), "doubled family modularly null");
  }
  o.require(worst_ratio <= 1.0 + 1e-12, "rho(2x)/rho(x) <= 2^psup");
  o.detail << "max rho(2x)/(2^psup rho(x)) = " << worst_ratio;
}

// p = 2 rows: 2u_j - u_{j-1} - u_{j+1} = 2 phi_j - phi_{j-1} - phi_{j+1}
std::vector<double> thomas(const std::vector<double>& phi) {
  const std::size_t m = phi.size() - 2;
  std::vector<double> c(m), d(m), x(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double rhs = 2 * phi[j + 1] - phi[j] - phi[j + 2];
    const double denom = 2.0 + (j ? c[j - 1] : 0.0);
    c[j] = -1.0 / denom;
    d[j] = (rhs + (j ? d[j - 1] : 0.0)) / denom;
  }
  x[m - 1] = d[m - 1];
  for (std::size_t j = m - 1; j-- > 0;) x[j] = d[j] - c[j] * x[j + 1];
  return x;
}

void dirichlet(Outcome& o) {
  const Interval unit{0.0, 1.0};
  {
    const auto prob = assemble_energy(64, ExponentSpec::affine_on(0.0, 2.0, unit),
                                      [](double x) { return x; });
    const auto tr = minimize_energy(prob);
    const auto oracle = thomas(prob.phi);
    double umax = 0.0, dev = 0.0;
    for (std::size_t j = 0; j < oracle.size(); ++j) {
      umax = std::max(umax, std::abs(tr.final_u[j]));
      dev = std::max(dev, std::abs(tr.final_u[j] - oracle[j]));
    }
    const double f_oracle = energy_value(prob, oracle);
    const double f = tr.iterates.back().energy;
    o.require(umax <= 1e-6 && dev <= 1e-6, "p=2: ||u*|| <= 1e-6 and matches the oracle");
    o.require(std::abs(f - f_oracle) <= 1e-6 && std::abs(f - 1.0) <= 1e-6, "p=2: F* = 1 +- 1e-6");
    o.detail << "p=2 |u|=" << umax << " F=" << f << "; ";
  }
  report_suite(o, "prop-dirichlet");
}

void determinism(Outcome& o) {
  cli::ScenarioConfig cfg;
  cfg.command = "suite";
  cfg.seed = 1;
  cfg.parallel = std::max(1u, std::thread::hardware_concurrency());
  const auto a = cli::run(cfg, {});
  const auto b = cli::run(cfg, {});
  auto strip = [](cli::Json r) {
    r.erase("timestamp");
    return cli::serialize(r);
  };
  o.require(strip(a.report) == strip(b.report), "byte-identical reports modulo timestamp");
  o.require(a.exit_code == 0, "every scenario passes");
  o.detail << a.report["result"]["scenarios"].size() << " scenarios, "
           << strip(a.report).size() << " bytes";
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<void(Outcome&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "boundary example rho(1)=1/2, ||1||=1", 2, boundary},
      {2, "Delta_2 dichotomy and witness", 5, delta2},
      {3, "non-open ball chain for p_n = n", 2, ball_chain},
      {4, "L^p(.) counterexample bounds", 5, lp_bounds},
      {5, "norm-modular property suite", 10, [](Outcome& o) { report_suite(o, "prop-norm-modular"); }},
      {6, "finite-dimensional Delta_2", 5, finite_dim},
      {7, "Dirichlet solver", 30, dirichlet},
      {8, "determinism of the full suite", 60, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("threw ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < c.budget_s, "runtime budget");
    if (!o.pass) ++failures;
    std::printf("%s %d %s (%.2fs < %.0fs) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                c.budget_s, o.detail.str().c_str());
  }
  return failures == 0 ? 0 : 1;
}
