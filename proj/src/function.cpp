#include "modtop/function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modtop/error.hpp"

namespace modtop {

double harmonic_cell_height(std::size_t n) {
  const double dn = static_cast<double>(n);
  return std::exp(std::log(dn) / dn);
}

PiecewiseFunction PiecewiseFunction::constant(Interval domain, double c) {
  return from_pieces({domain.lo, domain.hi}, {c});
}

PiecewiseFunction PiecewiseFunction::from_pieces(std::vector<double> breakpoints,
                                                 std::vector<double> values) {
  if (values.empty() || breakpoints.size() != values.size() + 1) {
    throw Error(ErrorCode::InvalidArgument, "piecewise function needs m+1 breakpoints for m values");
  }
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      throw Error(ErrorCode::InvalidArgument, "breakpoints must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "piece value not finite");
  }
  PiecewiseFunction u;
  u.form_ = Form::Pieces;
  // merge equal neighbours so equal functions compare equal
  u.breakpoints_.push_back(breakpoints.front());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i] + 0.0;
    if (!u.values_.empty() && u.values_.back() == v) {
      u.breakpoints_.back() = breakpoints[i + 1];
    } else {
      u.values_.push_back(v);
      u.breakpoints_.push_back(breakpoints[i + 1]);
    }
  }
  return u;
}

PiecewiseFunction PiecewiseFunction::harmonic_cells(SequenceVec cell_scales) {
  PiecewiseFunction u;
  u.form_ = Form::HarmonicCells;
  u.cell_scales_ = std::move(cell_scales);
  return u;
}

Interval PiecewiseFunction::domain() const {
  if (form_ == Form::HarmonicCells) return {0.0, 1.0};
  return {breakpoints_.front(), breakpoints_.back()};
}

bool PiecewiseFunction::is_zero() const {
  if (form_ == Form::HarmonicCells) return cell_scales_.is_zero();
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double PiecewiseFunction::at(double x) const {
  const Interval d = domain();
  if (!(x > d.lo && x < d.hi)) throw Error(ErrorCode::DomainMismatch, "point outside domain");
  if (form_ == Form::HarmonicCells) {
    // x in (1/(n+1), 1/n]
    const auto n = static_cast<std::size_t>(std::floor(1.0 / x));
    return cell_scales_.at(n) * harmonic_cell_height(n);
  }
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  auto i = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
  return values_[std::clamp<std::size_t>(i, 1, values_.size()) - 1];
}

PiecewiseFunction PiecewiseFunction::scaled(double c) const {
  if (form_ == Form::HarmonicCells) return harmonic_cells(cell_scales_.scaled(c));
  std::vector<double> vals = values_;
  for (double& v : vals) v *= c;
  return from_pieces(breakpoints_, std::move(vals));
}

namespace {

PiecewiseFunction combine(const PiecewiseFunction& u, const PiecewiseFunction& v, double sign) {
  using Form = PiecewiseFunction::Form;
  if (u.form() != v.form()) {
    throw Error(ErrorCode::DomainMismatch, "cannot combine piecewise and catalog functions");
  }
  if (u.form() == Form::HarmonicCells) {
    return PiecewiseFunction::harmonic_cells(u.cell_scales() + v.cell_scales().scaled(sign));
  }
  if (!(u.domain() == v.domain())) throw Error(ErrorCode::DomainMismatch, "domains differ");
  std::vector<double> cuts;
  std::set_union(u.breakpoints().begin(), u.breakpoints().end(), v.breakpoints().begin(),
                 v.breakpoints().end(), std::back_inserter(cuts));
  std::vector<double> vals;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    vals.push_back(u.at(mid) + sign * v.at(mid));
  }
  return PiecewiseFunction::from_pieces(std::move(cuts), std::move(vals));
}

}  // namespace

PiecewiseFunction operator-(const PiecewiseFunction& u, const PiecewiseFunction& v) {
  return combine(u, v, -1.0);
}

PiecewiseFunction operator+(const PiecewiseFunction& u, const PiecewiseFunction& v) {
  return combine(u, v, 1.0);
}

std::string PiecewiseFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (form_ == Form::HarmonicCells) {
    os << "catalog=v;cells=" << cell_scales_.describe();
    return os.str();
  }
  os << "pieces=[";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) os << ',';
    os << '(' << breakpoints_[i] << ".." << breakpoints_[i + 1] << ',' << values_[i] << ')';
  }
  os << ']';
  return os.str();
}

}  // namespace modtop
