// modtop: batch front end for the modular-space diagnostics.
//
//   modtop modular --seq "runs=[(1..2,0.5)];tail=zero" --exp identity
//   modtop counterexample --name lux-boundary-p-reciprocal
//   modtop suite --parallel 4 --out reports/
//   modtop --config run.json
//
// Exit status: 0 all checks pass, 1 a check or scenario failed, 2 bad configuration.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modtop/cli/runner.hpp"
#include "modtop/error.hpp"

namespace {

using modtop::cli::Json;

struct Flags {
  std::optional<std::string> config;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> parallel;

  std::optional<std::string> seq, fun, exp, name, family, phi;
  std::optional<double> lambda, radius, residual_tol;
  std::optional<std::size_t> terms, count, n, max_iter;
  std::vector<std::string> names;
  std::vector<double> lambdas;
};

int fail_config(const std::string& msg) {
  std::cerr << "modtop: " << msg << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-exponent modular and Luxemburg-norm diagnostics"};
  app.require_subcommand(0, 1);
  Flags f;
  app.add_option("--config", f.config, "JSON config file");
  app.add_option("--tol", f.tol, "tolerance for the command");
  app.add_option("--seed", f.seed, "seed for randomized runs");
  app.add_option("--out", f.out, "directory for report.json and CSV tables");
  app.add_option("--parallel", f.parallel, "worker threads for suite");

  auto element = [&](CLI::App* sub) {
    sub->add_option("--seq", f.seq, "sequence, e.g. runs=[(1..2,0.5)];tail=zero");
    sub->add_option("--fun", f.fun, "function, e.g. pieces=[(0..0.5,1)] or catalog=v");
  };
  auto exponent = [&](CLI::App* sub) {
    sub->add_option("--exp", f.exp, "exponent, e.g. table:2,3 affine:1,0 reciprocal:0,0.5");
  };

  auto* modular = app.add_subcommand("modular", "modular of an element");
  element(modular);
  exponent(modular);
  modular->add_option("--lambda", f.lambda, "evaluate rho(lambda x)");

  auto* norm = app.add_subcommand("norm", "Luxemburg norm and norm-modular relations");
  element(norm);
  exponent(norm);
  norm->add_option("--radius", f.radius, "Minkowski functional of { rho < r } instead");

  auto* delta2 = app.add_subcommand("delta2", "Delta_2 verdict and failure witness");
  exponent(delta2);
  delta2->add_option("--terms", f.terms, "witness terms");

  auto* converge = app.add_subcommand("converge", "classify a family converging to a limit");
  element(converge);
  exponent(converge);
  converge->add_option("--family", f.family, "prefixes | scaled");
  converge->add_option("--count", f.count, "family size");
  converge->add_option("--lambdas", f.lambdas, "lambda grid");

  auto* counterexample = app.add_subcommand("counterexample", "run a registry scenario");
  counterexample->add_option("--name", f.name, "scenario name");

  auto* dirichlet = app.add_subcommand("dirichlet", "minimize the discrete Dirichlet energy");
  exponent(dirichlet);
  dirichlet->add_option("--n", f.n, "cells");
  dirichlet->add_option("--phi", f.phi, "x | x(1-x) | zero | sin(pi x)");
  dirichlet->add_option("--max-iter", f.max_iter, "iteration budget");
  dirichlet->add_option("--residual-tol", f.residual_tol, "residual tolerance");

  auto* suite = app.add_subcommand("suite", "run scenarios and property suites");
  suite->add_option("--names", f.names, "subset to run (default: all)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    modtop::cli::ScenarioConfig config;
    const auto chosen = app.get_subcommands();
    if (f.config) {
      if (!chosen.empty()) return fail_config("--config and a command are exclusive");
      config = modtop::cli::load_config(*f.config);
    } else {
      if (chosen.empty()) return fail_config("no command given (see --help)");
      Json doc;
      doc["command"] = chosen.front()->get_name();
      Json params = Json::object();
      auto put = [&](const char* key, const auto& v) {
        if (v) params[key] = *v;
      };
      put("seq", f.seq);
      put("fun", f.fun);
      put("exp", f.exp);
      put("name", f.name);
      put("family", f.family);
      put("phi", f.phi);
      put("lambda", f.lambda);
      put("radius", f.radius);
      put("residual_tol", f.residual_tol);
      put("terms", f.terms);
      put("count", f.count);
      put("n", f.n);
      put("max_iter", f.max_iter);
      if (!f.names.empty()) params["names"] = f.names;
      if (!f.lambdas.empty()) params["lambdas"] = f.lambdas;
      doc["params"] = std::move(params);
      config = modtop::cli::parse_config(doc);
    }
    if (f.tol) config.tol = *f.tol;
    if (f.seed) config.seed = *f.seed;
    if (f.out) config.out = *f.out;
    if (f.parallel) {
      if (*f.parallel == 0) return fail_config("--parallel must be positive");
      config.parallel = *f.parallel;
    }
    if (config.tol && !(*config.tol > 0.0)) return fail_config("--tol must be positive");

    const auto result = modtop::cli::run(config, modtop::ModularConfig::from_env());
    std::cout << modtop::cli::serialize(result.report);
    if (config.out) modtop::cli::write_outputs(result, *config.out);
    return result.exit_code;
  } catch (const modtop::Error& e) {
    if (e.code() == modtop::ErrorCode::ConfigError) return fail_config(e.what());
    std::cerr << "modtop: " << e.what() << '\n';
    return 1;
  }
}
