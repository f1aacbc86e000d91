#pragma once

#include <cstddef>
#include <string>
#include <variant>

namespace modtop {

/// Why a modular value is infinite.
struct InfiniteCertificate {
  enum class Kind {
    /// Terms at indices [first, last] (only nonzero entries when
    /// `nonzero_only`) are nondecreasing and each >= delta > 0, and the
    /// rule named in `rule` guarantees the pattern continues forever.
    TermsNondecreasing,
    /// Some term has log-magnitude above the overflow cap.
    OverflowCap,
    /// A closed-form lower bound diverges; `rule` names it and `parameter`
    /// carries its constant (e.g. the base theta of theta^(1/x)).
    AnalyticComparison,
  };

  Kind kind = Kind::TermsNondecreasing;
  std::string rule;
  std::size_t first = 0;
  std::size_t last = 0;
  bool nonzero_only = false;
  double delta = 0.0;
  /// log of the offending term for OverflowCap
  double log_term = 0.0;
  std::size_t index = 0;
  double parameter = 0.0;
};

std::string to_string(InfiniteCertificate::Kind kind);

/// Extended nonnegative modular value with a finiteness verdict.
class ModularValue {
 public:
  struct Finite {
    double value = 0.0;
    double error_bound = 0.0;
  };
  struct Infinite {
    InfiniteCertificate certificate;
  };
  struct Indeterminate {
    double lower_bound = 0.0;
    std::string reason;
  };

  static ModularValue finite(double value, double error_bound = 0.0);
  static ModularValue infinite(InfiniteCertificate certificate);
  static ModularValue indeterminate(double lower_bound, std::string reason);

  bool is_finite() const { return std::holds_alternative<Finite>(v_); }
  bool is_infinite() const { return std::holds_alternative<Infinite>(v_); }
  bool is_indeterminate() const { return std::holds_alternative<Indeterminate>(v_); }

  /// Finite value; throws NotFiniteModular otherwise.
  double value() const;
  double error_bound() const;
  /// Finite value, +inf for Infinite, and the partial lower bound for Indeterminate.
  double lower_bound() const;
  const InfiniteCertificate& certificate() const;
  const std::string& reason() const;

  /// Sum of two values; Infinite dominates Indeterminate which dominates Finite.
  friend ModularValue operator+(const ModularValue& a, const ModularValue& b);

  const std::variant<Finite, Infinite, Indeterminate>& variant() const { return v_; }

 private:
  explicit ModularValue(std::variant<Finite, Infinite, Indeterminate> v) : v_(std::move(v)) {}

  std::variant<Finite, Infinite, Indeterminate> v_;
};

std::string to_string(const ModularValue& v);

}  // namespace modtop
