#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modtop/diagnostics.hpp"

namespace modtop {

/// Randomized property suites, reported in the same shape as the registry
/// scenarios so the suite runner can mix both.
///
///   prop-norm-modular  norm-modular relations, homogeneity, triangle
///                      inequality, scaled norms and the sup bound on 100
///                      random table vectors
///   prop-dirichlet     gradient against finite differences, convexity, the
///                      p = 2 solve and the p(x) = 2 + 2x solve on 64 cells
const std::vector<std::string>& property_suite_names();

/// Throws UnknownScenario for names outside `property_suite_names()`.
ScenarioReport run_property_suite(const std::string& name, std::uint64_t seed = 1,
                                  const ModularConfig& cfg = {});

}  // namespace modtop
