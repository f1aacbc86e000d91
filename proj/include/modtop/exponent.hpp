#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace modtop {

/// Open interval (lo, hi) of the real line.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// A variable exponent: either a sequence (p_n), n = 1, 2, ..., or a
/// function p(x) on an interval. Every value the spec hands out is >= 1.
///
/// Table specs are finite-dimensional: vectors measured against them must be
/// supported on the first `dimension()` coordinates.
class ExponentSpec {
 public:
  enum class Kind { Table, Affine, Reciprocal, PiecewiseConst, Custom };

  struct Flags {
    bool monotone_nondecreasing = false;
    bool declared_unbounded = false;
  };

  static ExponentSpec table(std::vector<double> values);
  /// p_n = slope * n + intercept.
  static ExponentSpec affine(double slope, double intercept);
  /// p(x) = slope * x + intercept on `domain`.
  static ExponentSpec affine_on(double slope, double intercept, Interval domain);
  /// p(x) = 1/x on `domain`, 0 <= lo < hi <= 1.
  static ExponentSpec reciprocal(Interval domain);
  /// breakpoints b_0 < ... < b_m, p = values[i] on (b_i, b_{i+1}).
  static ExponentSpec piecewise(std::vector<double> breakpoints, std::vector<double> values);
  static ExponentSpec custom_sequence(std::function<double(std::size_t)> p, Flags flags,
                                      std::string label);
  static ExponentSpec custom_function(std::function<double(double)> p, Interval domain,
                                      Flags flags, std::string label);

  Kind kind() const { return kind_; }
  const Flags& flags() const { return flags_; }
  bool is_sequence() const { return !domain_.has_value(); }
  bool is_function() const { return domain_.has_value(); }
  const std::optional<Interval>& domain() const { return domain_; }
  /// Table dimension; empty for infinite-dimensional specs.
  std::optional<std::size_t> dimension() const;

  /// p_n for n >= 1. Throws InvalidExponent when the value is below 1 and
  /// DimensionMismatch past the end of a table.
  double at_index(std::size_t n) const;
  /// p(x). Affine specs accept any real x.
  double at(double x) const;

  /// Exact supremum when it is known analytically (Table, Affine, Reciprocal,
  /// PiecewiseConst). Infinity for analytically unbounded specs, empty for
  /// Custom specs.
  std::optional<double> known_supremum() const;

  double slope() const { return slope_; }
  double intercept() const { return intercept_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::string& label() const { return label_; }

  /// Textual form, e.g. `table:2,3,2.5`, `affine:1,0`, `reciprocal:0,0.5`.
  std::string describe() const;

 private:
  ExponentSpec() = default;

  Kind kind_ = Kind::Table;
  Flags flags_;
  std::optional<Interval> domain_;
  std::vector<double> values_;
  std::vector<double> breakpoints_;
  double slope_ = 0.0;
  double intercept_ = 0.0;
  std::function<double(std::size_t)> seq_fn_;
  std::function<double(double)> fun_fn_;
  std::string label_;
};

}  // namespace modtop
