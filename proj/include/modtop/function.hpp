#pragma once

#include <string>
#include <vector>

#include "modtop/exponent.hpp"
#include "modtop/sequence.hpp"

namespace modtop {

/// Element of M(Omega) on an interval: either piecewise constant, or the
/// harmonic-cell catalog family
///
///   u(x) = s_n * n^(1/n)   on the cell (1/(n+1), 1/n),  n = 1, 2, ...
///
/// on (0, 1), where the cell scales (s_n) form a SequenceVec. The catalog
/// function v of the reciprocal-exponent counterexample is s = 1; its
/// truncation v_k has s = 1 on cells 1..k and 0 afterwards.
class PiecewiseFunction {
 public:
  enum class Form { Pieces, HarmonicCells };

  static PiecewiseFunction constant(Interval domain, double c);
  /// breakpoints b_0 < ... < b_m spanning the domain, u = values[i] on (b_i, b_{i+1}).
  static PiecewiseFunction from_pieces(std::vector<double> breakpoints, std::vector<double> values);
  static PiecewiseFunction harmonic_cells(SequenceVec cell_scales);
  static PiecewiseFunction catalog_v(double scale = 1.0) {
    return harmonic_cells(SequenceVec::constant(scale));
  }

  Form form() const { return form_; }
  Interval domain() const;
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  const SequenceVec& cell_scales() const { return cell_scales_; }

  bool is_zero() const;
  double at(double x) const;

  PiecewiseFunction scaled(double c) const;
  friend PiecewiseFunction operator-(const PiecewiseFunction& u, const PiecewiseFunction& v);
  friend PiecewiseFunction operator+(const PiecewiseFunction& u, const PiecewiseFunction& v);
  bool operator==(const PiecewiseFunction&) const = default;

  std::string describe() const;

 private:
  Form form_ = Form::Pieces;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  SequenceVec cell_scales_;
};

/// Value of the catalog family on cell n before scaling: n^(1/n).
double harmonic_cell_height(std::size_t n);

}  // namespace modtop
