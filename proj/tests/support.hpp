#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "modtop/exponent.hpp"
#include "modtop/sequence.hpp"

namespace modtop::testing {

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

/// Hand-rolled generators for property runs; every test seeds its own engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  ExponentSpec table(std::size_t dim, double lo = 1.0, double hi = 6.0) {
    std::vector<double> v(dim);
    for (double& x : v) x = uniform(lo, hi);
    return ExponentSpec::table(std::move(v));
  }

  std::vector<double> values(std::size_t dim, double amplitude) {
    std::vector<double> v(dim);
    for (double& x : v) x = uniform(-amplitude, amplitude);
    return v;
  }

  SequenceVec vector(std::size_t dim, double amplitude) {
    const auto v = values(dim, amplitude);
    return SequenceVec::dense(v);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace modtop::testing
