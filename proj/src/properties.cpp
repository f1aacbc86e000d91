#include "modtop/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "modtop/dirichlet.hpp"
#include "modtop/error.hpp"

namespace modtop {

namespace {

Check check(std::string name, bool passed, double value, double bound, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.passed = passed;
  c.value = value;
  c.bound = bound;
  c.detail = std::move(detail);
  return c;
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  std::vector<double> values(std::size_t dim, double amplitude) {
    std::vector<double> v(dim);
    for (double& x : v) x = uniform(-amplitude, amplitude);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

void norm_modular(ScenarioReport& rep, std::uint64_t seed, const ModularConfig& cfg) {
  Draw draw(seed);
  NormOptions tight;
  tight.tol = 1e-12;
  tight.modular = cfg;
  std::size_t relations_ok = 0;
  double homogeneity = 0.0, triangle = 0.0, sandwich = 0.0, sup_gap = 0.0;
  constexpr int kTrials = 100;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t dim = draw.index(1, 3);
    std::vector<double> pv(dim);
    for (double& v : pv) v = draw.uniform(1.0, 6.0);
    const auto p = ExponentSpec::table(pv);
    const auto x = SequenceVec::dense(draw.values(dim, trial % 2 ? 0.9 : 2.5));
    const auto y = SequenceVec::dense(draw.values(dim, 2.0));

    if (verify_norm_modular_relations(x, p, 1e-8, tight).all_pass) ++relations_ok;

    const double nx = luxemburg_norm(x, p, tight).value;
    const double ny = luxemburg_norm(y, p, tight).value;
    for (double c : {-2.0, -1.0, 0.5, 3.0}) {
      const double ncx = luxemburg_norm(x.scaled(c), p, tight).value;
      homogeneity = std::max(homogeneity, std::abs(ncx - std::abs(c) * nx));
    }
    triangle = std::max(triangle, luxemburg_norm(x + y, p, tight).value - nx - ny);
    for (double alpha : {0.25, 0.5, 2.0, 4.0}) {
      // the norm under rho(alpha .) is the norm of alpha x
      const double na = luxemburg_norm(x.scaled(alpha), p, tight).value;
      const double lo = alpha < 1 ? alpha * nx : nx;
      const double hi = alpha < 1 ? nx : alpha * nx;
      sandwich = std::max({sandwich, lo - na, na - hi});
    }
    sup_gap = std::max(sup_gap, x.sup_abs() - nx);
  }
  rep.checks.push_back(check("norm-modular-relations", relations_ok == kTrials,
                             static_cast<double>(relations_ok), kTrials));
  rep.checks.push_back(check("homogeneity", homogeneity <= 2e-10, homogeneity, 2e-10));
  rep.checks.push_back(check("triangle-inequality", triangle <= 2e-10, triangle, 2e-10));
  rep.checks.push_back(check("scaled-norm-sandwich", sandwich <= 1e-8, sandwich, 1e-8));
  rep.checks.push_back(check("sup-below-norm", sup_gap <= 1e-10, sup_gap, 1e-10));
  rep.values.emplace_back("max homogeneity error", homogeneity);
  rep.values.emplace_back("max triangle excess", triangle);
}

void dirichlet(ScenarioReport& rep, std::uint64_t seed) {
  const Interval unit{0.0, 1.0};
  const auto linear = ExponentSpec::affine_on(2.0, 2.0, unit);
  const auto two = ExponentSpec::affine_on(0.0, 2.0, unit);
  Draw draw(seed);

  double fd_worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double a = draw.uniform(-1, 1), b = draw.uniform(-1, 1);
    const std::size_t n = 8u << (trial % 3);
    const auto prob = assemble_energy(n, linear, [&](double x) { return a * x + b * x * x; });
    const auto u = draw.values(n - 1, 0.1);
    const auto grad = energy_gradient(prob, u);
    double scale = 0.0, worst = 0.0;
    for (double g : grad) scale = std::max(scale, std::abs(g));
    for (std::size_t j = 0; j < u.size(); ++j) {
      auto up = u, um = u;
      up[j] += 1e-6;
      um[j] -= 1e-6;
      const double fd = (energy_value(prob, up) - energy_value(prob, um)) / 2e-6;
      worst = std::max(worst, std::abs(fd - grad[j]));
    }
    fd_worst = std::max(fd_worst, worst / scale);
  }
  rep.checks.push_back(check("gradient-finite-difference", fd_worst < 1e-6, fd_worst, 1e-6));

  double convexity = -std::numeric_limits<double>::infinity();
  {
    const auto prob = assemble_energy(16, linear, [](double x) { return std::sin(3 * x); });
    for (int trial = 0; trial < 100; ++trial) {
      const auto u = draw.values(15, 1.0), v = draw.values(15, 1.0);
      std::vector<double> mid(15);
      for (std::size_t j = 0; j < 15; ++j) mid[j] = 0.5 * (u[j] + v[j]);
      convexity = std::max(convexity, energy_value(prob, mid) - 0.5 * energy_value(prob, u) -
                                          0.5 * energy_value(prob, v));
    }
  }
  rep.checks.push_back(check("convexity", convexity <= 1e-12, convexity, 1e-12));

  {
    const auto prob = assemble_energy(64, two, [](double x) { return x; });
    const auto tr = minimize_energy(prob);
    double umax = 0.0;
    for (double v : tr.final_u) umax = std::max(umax, std::abs(v));
    const double energy = tr.iterates.back().energy;
    rep.checks.push_back(check("p2-solution-zero", tr.converged && umax <= 1e-6, umax, 1e-6));
    rep.checks.push_back(check("p2-energy-one", std::abs(energy - 1.0) <= 1e-6, energy, 1.0));
  }

  {
    const auto prob = assemble_energy(64, linear, [](double x) { return x; });
    SolveOptions opts;
    opts.tol = 1e-6 * prob.h / 2;
    const auto tr = minimize_energy(prob, opts);
    const auto res = residual_check(prob, tr.final_u, 1e-6);
    rep.checks.push_back(check("variable-p-residual", tr.converged && res.pass, res.max_residual, 1e-6));
    double rise = 0.0;
    for (std::size_t k = 1; k < tr.iterates.size(); ++k) {
      const double prev = tr.iterates[k - 1].energy;
      rise = std::max(rise, (tr.iterates[k].energy - prev) / prev);
    }
    rep.checks.push_back(check("energy-monotone", rise <= 1e-14, rise, 1e-14));
    const auto& md = tr.modular_distance;
    bool decreasing = true;
    for (std::size_t i = md.size() / 2; i + 1 < md.size(); ++i) {
      decreasing = decreasing && md[i + 1].second <= md[i].second;
    }
    rep.checks.push_back(check("modular-distance-decreasing", decreasing, md.back().second, 0.0));
    rep.values.emplace_back("variable-p energy", tr.iterates.back().energy);
    rep.values.emplace_back("variable-p iterations", static_cast<double>(tr.iterates.back().iteration));
  }
}

}  // namespace

const std::vector<std::string>& property_suite_names() {
  static const std::vector<std::string> names = {"prop-norm-modular", "prop-dirichlet"};
  return names;
}

ScenarioReport run_property_suite(const std::string& name, std::uint64_t seed,
                                  const ModularConfig& cfg) {
  ScenarioReport rep;
  rep.name = name;
  rep.seed = seed;
  if (name == "prop-norm-modular") {
    norm_modular(rep, seed, cfg);
  } else if (name == "prop-dirichlet") {
    dirichlet(rep, seed);
  } else {
    throw Error(ErrorCode::UnknownScenario, "unknown property suite '" + name + "'");
  }
  return rep;
}

}  // namespace modtop
