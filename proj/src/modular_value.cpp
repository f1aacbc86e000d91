#include "modtop/modular_value.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "modtop/error.hpp"

namespace modtop {

std::string to_string(InfiniteCertificate::Kind kind) {
  switch (kind) {
    case InfiniteCertificate::Kind::TermsNondecreasing: return "terms-eventually-nondecreasing";
    case InfiniteCertificate::Kind::OverflowCap: return "overflow-cap-exceeded";
    case InfiniteCertificate::Kind::AnalyticComparison: return "analytic-comparison";
  }
  return "unknown";
}

ModularValue ModularValue::finite(double value, double error_bound) {
  if (!(value >= 0.0) || !std::isfinite(value) || !(error_bound >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "finite modular value must be >= 0 with error >= 0");
  }
  return ModularValue(Finite{value, error_bound});
}

ModularValue ModularValue::infinite(InfiniteCertificate certificate) {
  return ModularValue(Infinite{std::move(certificate)});
}

ModularValue ModularValue::indeterminate(double lower_bound, std::string reason) {
  return ModularValue(Indeterminate{std::max(0.0, lower_bound), std::move(reason)});
}

double ModularValue::value() const {
  if (const auto* f = std::get_if<Finite>(&v_)) return f->value;
  throw Error(ErrorCode::NotFiniteModular, "modular value is " + to_string(*this));
}

double ModularValue::error_bound() const {
  if (const auto* f = std::get_if<Finite>(&v_)) return f->error_bound;
  throw Error(ErrorCode::NotFiniteModular, "modular value is " + to_string(*this));
}

double ModularValue::lower_bound() const {
  if (const auto* f = std::get_if<Finite>(&v_)) return f->value;
  if (const auto* i = std::get_if<Indeterminate>(&v_)) return i->lower_bound;
  return std::numeric_limits<double>::infinity();
}

const InfiniteCertificate& ModularValue::certificate() const {
  if (const auto* i = std::get_if<Infinite>(&v_)) return i->certificate;
  throw Error(ErrorCode::InvalidArgument, "no certificate on a non-infinite value");
}

const std::string& ModularValue::reason() const {
  if (const auto* i = std::get_if<Indeterminate>(&v_)) return i->reason;
  throw Error(ErrorCode::InvalidArgument, "no reason on a determinate value");
}

ModularValue operator+(const ModularValue& a, const ModularValue& b) {
  if (a.is_infinite()) return a;
  if (b.is_infinite()) return b;
  if (a.is_indeterminate() || b.is_indeterminate()) {
    const std::string& why = a.is_indeterminate() ? a.reason() : b.reason();
    return ModularValue::indeterminate(a.lower_bound() + b.lower_bound(), why);
  }
  return ModularValue::finite(a.value() + b.value(), a.error_bound() + b.error_bound());
}

std::string to_string(const ModularValue& v) {
  std::ostringstream os;
  os.precision(17);
  if (v.is_finite()) {
    os << "Finite(" << v.value() << " +/- " << v.error_bound() << ')';
  } else if (v.is_infinite()) {
    os << "Infinite(" << to_string(v.certificate().kind);
    if (!v.certificate().rule.empty()) os << ": " << v.certificate().rule;
    os << ')';
  } else {
    os << "Indeterminate(>= " << v.lower_bound() << ", " << v.reason() << ')';
  }
  return os.str();
}

}  // namespace modtop
