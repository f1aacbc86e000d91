#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modtop/cli/report.hpp"
#include "modtop/modular.hpp"

namespace modtop::cli {

/// One batch run. `params` holds the command-specific keys:
///
///   modular         seq | fun, exp, lambda
///   norm            seq | fun, exp, radius
///   delta2          exp, terms
///   converge        seq | fun (the limit), exp, family ("prefixes" | "scaled"),
///                   count, lambdas
///   counterexample  name
///   dirichlet       n, exp, phi (name or node list), max_iter, residual_tol
///   suite           names
struct ScenarioConfig {
  std::string command;
  Json params = Json::object();
  std::optional<double> tol;
  std::optional<std::string> out;
  std::uint64_t seed = 1;
  std::size_t parallel = 1;
};

/// Validates a config document. Throws ConfigError on an empty document,
/// unknown keys, wrong types or an unknown command.
ScenarioConfig parse_config(const Json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);

struct RunOutput {
  int exit_code = 0;
  Json report;
  /// (file name, contents)
  std::vector<std::pair<std::string, std::string>> csv;
};

/// Executes the config. Scenario errors land in the report with exit code 1;
/// a malformed config throws ConfigError. The report carries a "timestamp"
/// field; everything else is a function of (config, seed).
RunOutput run(const ScenarioConfig& config, const ModularConfig& cfg);

/// Registry scenarios followed by the property suites.
std::vector<std::string> suite_names();

/// Runs the named scenarios on up to `parallelism` threads and aggregates
/// them in input order. Unknown names are reported per entry.
Json run_suite(const std::vector<std::string>& names, std::size_t parallelism,
               std::uint64_t seed, const ModularConfig& cfg);

/// report.json plus the CSV tables, into `dir` (created if needed).
void write_outputs(const RunOutput& output, const std::filesystem::path& dir);

/// Pretty-printed report with a trailing newline.
std::string serialize(const Json& report);

}  // namespace modtop::cli
