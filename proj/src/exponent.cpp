#include "modtop/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "modtop/error.hpp"

namespace modtop {

namespace {

std::string join(const std::vector<double>& xs) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ',';
    os << xs[i];
  }
  return os.str();
}

void require_at_least_one(double p, const char* what) {
  if (!(p >= 1.0)) {
    throw Error(ErrorCode::InvalidExponent, std::string(what) + " value below 1");
  }
}

}  // namespace

ExponentSpec ExponentSpec::table(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidExponent, "empty table");
  for (double v : values) require_at_least_one(v, "table");
  ExponentSpec s;
  s.kind_ = Kind::Table;
  s.values_ = std::move(values);
  return s;
}

ExponentSpec ExponentSpec::affine(double slope, double intercept) {
  if (!(slope >= 0.0) || !std::isfinite(slope) || !std::isfinite(intercept)) {
    throw Error(ErrorCode::InvalidExponent, "affine slope must be finite and >= 0");
  }
  require_at_least_one(slope + intercept, "affine p_1");
  ExponentSpec s;
  s.kind_ = Kind::Affine;
  s.slope_ = slope;
  s.intercept_ = intercept;
  s.flags_.monotone_nondecreasing = true;
  s.flags_.declared_unbounded = slope > 0.0;
  return s;
}

ExponentSpec ExponentSpec::affine_on(double slope, double intercept, Interval domain) {
  if (!(domain.lo < domain.hi)) throw Error(ErrorCode::InvalidArgument, "empty domain");
  if (!std::isfinite(slope) || !std::isfinite(intercept)) {
    throw Error(ErrorCode::InvalidExponent, "affine coefficients must be finite");
  }
  require_at_least_one(std::min(slope * domain.lo, slope * domain.hi) + intercept, "affine");
  ExponentSpec s;
  s.kind_ = Kind::Affine;
  s.slope_ = slope;
  s.intercept_ = intercept;
  s.domain_ = domain;
  s.flags_.monotone_nondecreasing = slope >= 0.0;
  return s;
}

ExponentSpec ExponentSpec::reciprocal(Interval domain) {
  if (!(domain.lo >= 0.0 && domain.lo < domain.hi && domain.hi <= 1.0)) {
    throw Error(ErrorCode::InvalidExponent, "reciprocal exponent needs 0 <= lo < hi <= 1");
  }
  ExponentSpec s;
  s.kind_ = Kind::Reciprocal;
  s.domain_ = domain;
  s.flags_.declared_unbounded = domain.lo == 0.0;
  return s;
}

ExponentSpec ExponentSpec::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
  if (values.empty() || breakpoints.size() != values.size() + 1) {
    throw Error(ErrorCode::InvalidExponent, "piecewise needs m+1 breakpoints for m values");
  }
  if (!std::is_sorted(breakpoints.begin(), breakpoints.end()) ||
      std::adjacent_find(breakpoints.begin(), breakpoints.end()) != breakpoints.end()) {
    throw Error(ErrorCode::InvalidExponent, "breakpoints must be strictly increasing");
  }
  for (double v : values) require_at_least_one(v, "piecewise");
  ExponentSpec s;
  s.kind_ = Kind::PiecewiseConst;
  s.domain_ = Interval{breakpoints.front(), breakpoints.back()};
  s.breakpoints_ = std::move(breakpoints);
  s.values_ = std::move(values);
  return s;
}

ExponentSpec ExponentSpec::custom_sequence(std::function<double(std::size_t)> p, Flags flags,
                                           std::string label) {
  if (!p) throw Error(ErrorCode::InvalidArgument, "custom exponent without evaluator");
  ExponentSpec s;
  s.kind_ = Kind::Custom;
  s.seq_fn_ = std::move(p);
  s.flags_ = flags;
  s.label_ = std::move(label);
  return s;
}

ExponentSpec ExponentSpec::custom_function(std::function<double(double)> p, Interval domain,
                                           Flags flags, std::string label) {
  if (!p) throw Error(ErrorCode::InvalidArgument, "custom exponent without evaluator");
  if (!(domain.lo < domain.hi)) throw Error(ErrorCode::InvalidArgument, "empty domain");
  ExponentSpec s;
  s.kind_ = Kind::Custom;
  s.fun_fn_ = std::move(p);
  s.domain_ = domain;
  s.flags_ = flags;
  s.label_ = std::move(label);
  return s;
}

std::optional<std::size_t> ExponentSpec::dimension() const {
  if (kind_ == Kind::Table) return values_.size();
  return std::nullopt;
}

double ExponentSpec::at_index(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sequence indices start at 1");
  double p = 0.0;
  switch (kind_) {
    case Kind::Table:
      if (n > values_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "index " + std::to_string(n) + " past table end");
      }
      p = values_[n - 1];
      break;
    case Kind::Affine:
      p = slope_ * static_cast<double>(n) + intercept_;
      break;
    case Kind::Custom:
      if (!seq_fn_) throw Error(ErrorCode::DomainMismatch, "function exponent queried by index");
      p = seq_fn_(n);
      break;
    default:
      throw Error(ErrorCode::DomainMismatch, "function exponent queried by index");
  }
  require_at_least_one(p, "exponent");
  return p;
}

double ExponentSpec::at(double x) const {
  double p = 0.0;
  switch (kind_) {
    case Kind::Affine:
      p = slope_ * x + intercept_;
      break;
    case Kind::Reciprocal:
      p = 1.0 / x;
      break;
    case Kind::PiecewiseConst: {
      auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
      auto i = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
      i = std::clamp<std::size_t>(i, 1, values_.size());
      p = values_[i - 1];
      break;
    }
    case Kind::Custom:
      if (!fun_fn_) throw Error(ErrorCode::DomainMismatch, "sequence exponent queried at a point");
      p = fun_fn_(x);
      break;
    case Kind::Table:
      throw Error(ErrorCode::DomainMismatch, "table exponent queried at a point");
  }
  require_at_least_one(p, "exponent");
  return p;
}

std::optional<double> ExponentSpec::known_supremum() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::Table:
    case Kind::PiecewiseConst:
      return *std::max_element(values_.begin(), values_.end());
    case Kind::Affine:
      if (domain_) return std::max(slope_ * domain_->lo, slope_ * domain_->hi) + intercept_;
      return slope_ > 0.0 ? inf : intercept_;
    case Kind::Reciprocal:
      return domain_->lo == 0.0 ? inf : 1.0 / domain_->lo;
    case Kind::Custom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string ExponentSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Table:
      return "table:" + join(values_);
    case Kind::Affine:
      os << "affine:" << slope_ << ',' << intercept_;
      if (domain_) os << '@' << domain_->lo << ',' << domain_->hi;
      return os.str();
    case Kind::Reciprocal:
      os << "reciprocal:" << domain_->lo << ',' << domain_->hi;
      return os.str();
    case Kind::PiecewiseConst:
      return "piecewise:" + join(breakpoints_) + ";" + join(values_);
    case Kind::Custom:
      return "custom:" + label_;
  }
  return {};
}

}  // namespace modtop
