#include "modtop/modular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>

#include "modtop/error.hpp"
#include "modtop/quadrature.hpp"

namespace modtop {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::size_t kCertificateWindow = 64;
constexpr std::size_t kClosedFormRun = 64;

// Neumaier-compensated sum with a running rounding-error bound.
class Accumulator {
 public:
  void add(double term, double log_magnitude) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      comp_ += (sum_ - t) + term;
    } else {
      comp_ += (term - t) + sum_;
    }
    sum_ = t;
    // exp(p ln|a|) carries about |p ln|a|| ulps of relative error
    err_ += term * (std::abs(log_magnitude) + 4.0) * kEps;
  }
  void add_with_error(double term, double error) {
    add(term, 0.0);
    err_ += error;
  }
  double total() const { return sum_ + comp_; }
  double error() const { return err_ + 2.0 * kEps * std::abs(total()); }
  ModularValue finite() const { return ModularValue::finite(total(), error()); }
  ModularValue indeterminate(std::string reason) const {
    return ModularValue::indeterminate(total(), std::move(reason));
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double err_ = 0.0;
};

// exp() itself overflows past log(DBL_MAX) ~ 709.78 whatever the configured cap
double cap(const ModularConfig& cfg) { return std::min(cfg.overflow_log_cap, 709.0); }

ModularValue overflow(std::size_t index, double lt) {
  InfiniteCertificate c;
  c.kind = InfiniteCertificate::Kind::OverflowCap;
  c.rule = rules::kOverflow;
  c.index = index;
  c.log_term = lt;
  return ModularValue::infinite(std::move(c));
}

// ---------------------------------------------------------------- sequences

std::optional<ModularValue> add_affine_run(Accumulator& acc, const Run& run,
                                           const ExponentSpec& p, const ModularConfig& cfg) {
  const double la = std::log(std::abs(run.value));
  const double lt_first = p.at_index(run.first) * la;
  const double lt_last = p.at_index(run.last) * la;
  if (lt_first > cap(cfg)) return overflow(run.first, lt_first);
  if (lt_last > cap(cfg)) return overflow(run.last, lt_last);
  const double count = static_cast<double>(run.length());
  const double q = p.slope() * la;  // log of the term ratio
  double sum;
  if (q == 0.0) {
    sum = count * std::exp(lt_first);
  } else {
    sum = std::exp(lt_first) * (std::expm1(count * q) / std::expm1(q));
  }
  if (!std::isfinite(sum)) return overflow(run.last, lt_last);
  acc.add_with_error(sum, sum * (std::abs(lt_first) + std::abs(lt_last) + 16.0) * kEps);
  return std::nullopt;
}

std::optional<ModularValue> add_run(Accumulator& acc, const Run& run, const ExponentSpec& p,
                                    const ModularConfig& cfg) {
  if (run.value == 0.0) return std::nullopt;
  if (p.kind() == ExponentSpec::Kind::Affine && run.length() > kClosedFormRun) {
    return add_affine_run(acc, run, p, cfg);
  }
  const double la = std::log(std::abs(run.value));
  for (std::size_t n = run.first; n <= run.last; ++n) {
    const double lt = p.at_index(n) * la;
    if (lt > cap(cfg)) return overflow(n, lt);
    acc.add(std::exp(lt), lt);
  }
  return std::nullopt;
}

// Window of tail terms starting at `start`, certified nondecreasing by `rule`.
ModularValue divergent_tail(double c, std::size_t start, const ExponentSpec& p,
                            const ModularConfig& cfg, const char* rule) {
  const double la = std::log(std::abs(c));
  double min_lt = std::numeric_limits<double>::infinity();
  for (std::size_t n = start; n < start + kCertificateWindow; ++n) {
    const double lt = p.at_index(n) * la;
    if (lt > cap(cfg)) return overflow(n, lt);
    min_lt = std::min(min_lt, lt);
  }
  InfiniteCertificate cert;
  cert.kind = InfiniteCertificate::Kind::TermsNondecreasing;
  cert.rule = rule;
  cert.first = start;
  cert.last = start + kCertificateWindow - 1;
  cert.log_term = min_lt;
  cert.delta = std::exp(min_lt);
  cert.parameter = c;
  return ModularValue::infinite(std::move(cert));
}

ModularValue sum_custom_tail(Accumulator acc, double c, std::size_t start, const ExponentSpec& p,
                             const ModularConfig& cfg) {
  const double la = std::log(std::abs(c));
  const double log_near_one = std::log1p(-1e-12);
  const double log_tol = std::log(cfg.abs_tol);
  double lt_prev = p.at_index(start) * la;
  acc.add(std::exp(lt_prev), lt_prev);
  std::size_t near_one = 0;
  for (std::size_t n = start + 1;; ++n) {
    if (n - start >= cfg.term_cap) return acc.indeterminate("term cap reached before tail bound");
    const double lt = p.at_index(n) * la;
    const double log_ratio = lt - lt_prev;
    if (log_ratio > 0.0) {
      return acc.indeterminate("exponent declared monotone but decreased at index " +
                               std::to_string(n));
    }
    acc.add(std::exp(lt), lt);
    near_one = log_ratio >= log_near_one ? near_one + 1 : 0;
    if (near_one >= cfg.ratio_window) {
      return acc.indeterminate("term ratio within 1e-12 of 1 over " +
                               std::to_string(cfg.ratio_window) + " terms");
    }
    if (log_ratio < 0.0) {
      const double one_minus_r = -std::expm1(log_ratio);
      if (lt < log_tol + std::log(one_minus_r)) {
        const double remainder = std::exp(lt + log_ratio) / one_minus_r;
        acc.add_with_error(0.0, remainder);
        return acc.finite();
      }
    }
    lt_prev = lt;
  }
}

ModularValue add_tail(Accumulator acc, double c, std::size_t start, const ExponentSpec& p,
                      const ModularConfig& cfg) {
  if (c == 0.0) return acc.finite();
  const double ac = std::abs(c);
  const bool monotone = p.flags().monotone_nondecreasing;
  if (ac >= 1.0) {
    if (monotone || ac == 1.0) return divergent_tail(c, start, p, cfg, rules::kTailAtLeastOne);
    const double lt = p.at_index(start) * std::log(ac);
    if (lt > cap(cfg)) return overflow(start, lt);
    InfiniteCertificate cert;
    cert.kind = InfiniteCertificate::Kind::AnalyticComparison;
    cert.rule = rules::kTailAtLeastOne;
    cert.first = start;
    cert.parameter = c;
    return ModularValue::infinite(std::move(cert));
  }
  if (p.kind() == ExponentSpec::Kind::Affine) {
    if (p.slope() == 0.0) return divergent_tail(c, start, p, cfg, rules::kConstantExponentTail);
    // sum_{n >= start} |c|^(slope n + intercept) = |c|^(p_start) / (1 - |c|^slope)
    const double la = std::log(ac);
    const double lt = p.at_index(start) * la;
    const double sum = std::exp(lt) / -std::expm1(p.slope() * la);
    acc.add_with_error(sum, sum * (std::abs(lt) + 16.0) * kEps);
    return acc.finite();
  }
  if (p.kind() == ExponentSpec::Kind::Custom) {
    if (!monotone) {
      return acc.indeterminate("constant tail against a Custom exponent without monotone flag");
    }
    return sum_custom_tail(std::move(acc), c, start, p, cfg);
  }
  throw Error(ErrorCode::DomainMismatch, "sequence tail against a function exponent");
}

// ---------------------------------------------------------------- functions

// integral of theta^(1/x) over (l, r), 0 <= l < r <= 1
ModularValue reciprocal_cell(double theta, double l, double r, std::size_t piece, double tol,
                             const ModularConfig& cfg) {
  if (theta == 0.0) return ModularValue::finite(0.0);
  if (theta == 1.0) return ModularValue::finite(r - l, 2.0 * kEps * r);
  const double lt = std::log(theta);
  if (theta > 1.0) {
    if (l == 0.0) {
      // theta^(1/x) = e^(ln(theta)/x) >= 1 + ln(theta)/x, not integrable at 0
      InfiniteCertificate cert;
      cert.kind = InfiniteCertificate::Kind::AnalyticComparison;
      cert.rule = rules::kExpReciprocalHarmonic;
      cert.index = piece;
      cert.parameter = theta;
      return ModularValue::infinite(std::move(cert));
    }
    if (lt / l > cap(cfg)) return overflow(piece, lt / l);
  }
  auto f = [lt](double x) { return std::exp(lt / x); };
  quad::Result res;
  if (l == 0.0) {
    // theta < 1: integrand increasing in x, so the piece (0, w) holds at most w theta^(1/w)
    auto bound = [lt](double w) { return w * std::exp(lt / w); };
    res = quad::integrate_graded_left(f, 0.0, r, tol, cfg.cell_budget, bound);
  } else {
    res = quad::integrate(f, l, r, tol, cfg.cell_budget);
  }
  if (!res.converged) {
    return ModularValue::indeterminate(std::max(0.0, res.value - res.error),
                                       "quadrature budget exceeded");
  }
  return ModularValue::finite(std::max(0.0, res.value), res.error);
}

ModularValue generic_piece(double c, double l, double r, std::size_t piece, const ExponentSpec& p,
                           double tol, const ModularConfig& cfg) {
  const double la = std::log(std::abs(c));
  for (double x : {l, 0.5 * (l + r), r}) {
    const double lt = p.at(x) * la;
    if (lt > cap(cfg)) return overflow(piece, lt);
  }
  auto f = [&p, la](double x) { return std::exp(p.at(x) * la); };
  const quad::Result res = quad::integrate(f, l, r, tol, cfg.cell_budget);
  if (!std::isfinite(res.value)) return overflow(piece, std::numeric_limits<double>::infinity());
  if (!res.converged) {
    return ModularValue::indeterminate(std::max(0.0, res.value - res.error),
                                       "quadrature budget exceeded");
  }
  return ModularValue::finite(std::max(0.0, res.value), res.error);
}

ModularValue eval_pieces(const PiecewiseFunction& u, const ExponentSpec& p,
                         const ModularConfig& cfg) {
  const auto& bps = u.breakpoints();
  const auto& vals = u.values();
  const double piece_tol = cfg.abs_tol / (2.0 * static_cast<double>(vals.size()));
  ModularValue total = ModularValue::finite(0.0);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double c = vals[i];
    if (c == 0.0) continue;
    const double l = bps[i], r = bps[i + 1];
    ModularValue part = ModularValue::finite(0.0);
    switch (p.kind()) {
      case ExponentSpec::Kind::PiecewiseConst: {
        const auto& pb = p.breakpoints();
        const double la = std::log(std::abs(c));
        Accumulator acc;
        for (std::size_t j = 0; j < p.values().size(); ++j) {
          const double lo = std::max(l, pb[j]), hi = std::min(r, pb[j + 1]);
          if (!(hi > lo)) continue;
          const double lt = p.values()[j] * la;
          if (lt > cap(cfg)) return overflow(i, lt);
          acc.add((hi - lo) * std::exp(lt), lt);
        }
        part = acc.finite();
        break;
      }
      case ExponentSpec::Kind::Reciprocal:
        part = reciprocal_cell(std::abs(c), l, r, i, piece_tol, cfg);
        break;
      default:
        part = generic_piece(c, l, r, i, p, piece_tol, cfg);
        break;
    }
    total = total + part;
    if (total.is_infinite()) return total;
  }
  return total;
}

ModularValue eval_harmonic_cells(const PiecewiseFunction& u, const ExponentSpec& p,
                                 const ModularConfig& cfg) {
  if (p.kind() != ExponentSpec::Kind::Reciprocal) {
    throw Error(ErrorCode::DomainMismatch, "catalog functions are defined against p(x) = 1/x");
  }
  const SequenceVec& scales = u.cell_scales();
  auto cell = [&](std::size_t n, double s) {
    const double dn = static_cast<double>(n);
    const double theta = std::abs(s) * harmonic_cell_height(n);
    const double tol = cfg.abs_tol / (2.0 * (dn + 1.0) * (dn + 1.0));
    return reciprocal_cell(theta, 1.0 / (dn + 1.0), 1.0 / dn, n, tol, cfg);
  };
  ModularValue total = ModularValue::finite(0.0);
  for (const Run& run : scales.runs()) {
    if (run.value == 0.0) continue;
    for (std::size_t n = run.first; n <= run.last; ++n) {
      total = total + cell(n, run.value);
      if (total.is_infinite()) return total;
    }
  }
  const double s = std::abs(scales.tail());
  const std::size_t start = scales.tail_start();
  if (s == 0.0) return total;
  if (s >= 1.0) {
    // on cell n, 1/x > n gives (s n^(1/n))^(1/x) >= n, so the cell holds >= 1/(n+1)
    InfiniteCertificate cert;
    cert.kind = InfiniteCertificate::Kind::AnalyticComparison;
    cert.rule = rules::kHarmonicCells;
    cert.first = start;
    cert.parameter = s;
    return ModularValue::infinite(std::move(cert));
  }
  // cell n holds at most e^(1/e) s^n / (n+1); the rest after N is bounded by
  // e^(1/e) s^(N+1) / ((N+2)(1-s))
  const double ee = std::exp(std::exp(-1.0));
  auto remainder = [&](std::size_t last) {
    const double dn = static_cast<double>(last);
    return ee * std::exp((dn + 1.0) * std::log(s)) / ((dn + 2.0) * (1.0 - s));
  };
  std::size_t n = start;
  for (; remainder(n - 1) > cfg.abs_tol / 2.0; ++n) {
    if (n - start >= cfg.term_cap) {
      return ModularValue::indeterminate(total.lower_bound(), "term cap reached before tail bound");
    }
    total = total + cell(n, s);
  }
  return total + ModularValue::finite(0.0, remainder(n - 1));
}

void check_sequence_domain(const SequenceVec& x, const ExponentSpec& p) {
  if (!p.is_sequence()) throw Error(ErrorCode::DomainMismatch, "function exponent for a sequence");
  if (auto dim = p.dimension()) {
    if (x.has_nonzero_tail()) {
      throw Error(ErrorCode::IncompatibleTail, "nonzero constant tail against a table exponent");
    }
    if (*x.support_max() > *dim) {
      throw Error(ErrorCode::DimensionMismatch, "support exceeds table dimension " +
                                                    std::to_string(*dim));
    }
  }
}

void check_function_domain(const PiecewiseFunction& u, const ExponentSpec& p) {
  if (!p.is_function()) throw Error(ErrorCode::DomainMismatch, "sequence exponent for a function");
  if (!(u.domain() == *p.domain())) {
    throw Error(ErrorCode::DomainMismatch, "function and exponent domains differ");
  }
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "scale must be a positive finite number");
  }
}

template <class Element>
ModularValue diameter(std::span<const Element> set, const ExponentSpec& p,
                      const ModularConfig& cfg) {
  if (set.empty()) throw Error(ErrorCode::EmptySet, "diameter of an empty set");
  ModularValue best = ModularValue::finite(0.0);
  std::optional<ModularValue> undecided;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      ModularValue d = modular_distance(set[i], set[j], p, cfg);
      if (d.is_infinite()) return d;
      if (d.is_indeterminate()) {
        if (!undecided || d.lower_bound() > undecided->lower_bound()) undecided = d;
      } else if (d.value() > best.value()) {
        best = d;
      }
    }
  }
  if (undecided) {
    return ModularValue::indeterminate(std::max(best.value(), undecided->lower_bound()),
                                       undecided->reason());
  }
  return best;
}

}  // namespace

double log_term(double a, double p) {
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  return p * std::log(std::abs(a));
}

ModularConfig ModularConfig::from_env() {
  ModularConfig cfg;
  if (const char* text = std::getenv("MODTOP_CAP"); text && *text) {
    char* end = nullptr;
    const double v = std::strtod(text, &end);
    if (end == text || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::ConfigError, std::string("MODTOP_CAP is not a positive number: ") + text);
    }
    cfg.overflow_log_cap = v;
  }
  return cfg;
}

ModularValue eval_seq_modular(const SequenceVec& x, const ExponentSpec& p,
                              const ModularConfig& cfg) {
  check_sequence_domain(x, p);
  Accumulator acc;
  for (const Run& run : x.runs()) {
    if (auto inf = add_run(acc, run, p, cfg)) return *inf;
  }
  return add_tail(std::move(acc), x.tail(), x.tail_start(), p, cfg);
}

ModularValue eval_fun_modular(const PiecewiseFunction& u, const ExponentSpec& p,
                              const ModularConfig& cfg) {
  check_function_domain(u, p);
  if (u.is_zero()) return ModularValue::finite(0.0);
  if (u.form() == PiecewiseFunction::Form::HarmonicCells) return eval_harmonic_cells(u, p, cfg);
  return eval_pieces(u, p, cfg);
}

ModularValue scaled_modular(const SequenceVec& x, const ExponentSpec& p, double lambda,
                            const ModularConfig& cfg) {
  check_lambda(lambda);
  return eval_seq_modular(x.scaled(lambda), p, cfg);
}

ModularValue scaled_modular(const PiecewiseFunction& u, const ExponentSpec& p, double lambda,
                            const ModularConfig& cfg) {
  check_lambda(lambda);
  return eval_fun_modular(u.scaled(lambda), p, cfg);
}

ModularValue modular_distance(const SequenceVec& x, const SequenceVec& y, const ExponentSpec& p,
                              const ModularConfig& cfg) {
  return eval_seq_modular(x - y, p, cfg);
}

ModularValue modular_distance(const PiecewiseFunction& u, const PiecewiseFunction& v,
                              const ExponentSpec& p, const ModularConfig& cfg) {
  return eval_fun_modular(u - v, p, cfg);
}

ModularValue modular_diameter(std::span<const SequenceVec> set, const ExponentSpec& p,
                              const ModularConfig& cfg) {
  return diameter(set, p, cfg);
}

ModularValue modular_diameter(std::span<const PiecewiseFunction> set, const ExponentSpec& p,
                              const ModularConfig& cfg) {
  return diameter(set, p, cfg);
}

bool recheck_certificate(const SequenceVec& x, const ExponentSpec& p,
                         const InfiniteCertificate& cert, const ModularConfig& cfg) {
  using Kind = InfiniteCertificate::Kind;
  switch (cert.kind) {
    case Kind::OverflowCap:
      return cert.index >= 1 && log_term(x.at(cert.index), p.at_index(cert.index)) >
                                    cap(cfg);
    case Kind::AnalyticComparison:
      // every tail term is >= 1 and there are infinitely many of them
      return cert.rule == rules::kTailAtLeastOne && std::abs(x.tail()) >= 1.0 &&
             cert.first >= x.tail_start();
    case Kind::TermsNondecreasing: {
      if (cert.first < 1 || cert.last < cert.first) return false;
      const double slack = 1e-12 * std::max(1.0, std::abs(cert.log_term));
      double prev = -std::numeric_limits<double>::infinity();
      std::size_t seen = 0;
      for (std::size_t n = cert.first; n <= cert.last; ++n) {
        const double a = x.at(n);
        if (a == 0.0) {
          if (cert.nonzero_only) continue;
          return false;
        }
        const double lt = log_term(a, p.at_index(n));
        if (lt < cert.log_term - slack || lt < prev - slack) return false;
        prev = lt;
        ++seen;
      }
      return seen > 0;
    }
  }
  return false;
}

bool recheck_certificate(const PiecewiseFunction& u, const ExponentSpec& p,
                         const InfiniteCertificate& cert, const ModularConfig& cfg) {
  using Kind = InfiniteCertificate::Kind;
  if (p.kind() != ExponentSpec::Kind::Reciprocal) {
    if (cert.kind != Kind::OverflowCap || u.form() != PiecewiseFunction::Form::Pieces ||
        cert.index >= u.values().size()) {
      return false;
    }
    const double la = std::log(std::abs(u.values()[cert.index]));
    const double l = u.breakpoints()[cert.index], r = u.breakpoints()[cert.index + 1];
    for (double x : {l, 0.5 * (l + r), r}) {
      if (p.at(x) * la > cap(cfg)) return true;
    }
    return false;
  }
  if (cert.kind == Kind::AnalyticComparison && cert.rule == rules::kExpReciprocalHarmonic) {
    if (u.form() != PiecewiseFunction::Form::Pieces || cert.index >= u.values().size()) return false;
    const double theta = std::abs(u.values()[cert.index]);
    const double r = u.breakpoints()[cert.index + 1];
    if (u.breakpoints()[cert.index] != 0.0 || !(theta > 1.0) || theta != cert.parameter) {
      return false;
    }
    // e^t >= 1 + t with t = ln(theta)/x, sampled across the piece
    const double lt = std::log(theta);
    for (int k = 1; k <= 64; ++k) {
      const double x = r * std::ldexp(1.0, -k);
      const double t = lt / x;
      if (t < 700.0 && std::exp(t) < 1.0 + t) return false;
    }
    return true;
  }
  if (cert.kind == Kind::AnalyticComparison && cert.rule == rules::kHarmonicCells) {
    if (u.form() != PiecewiseFunction::Form::HarmonicCells) return false;
    const double s = std::abs(u.cell_scales().tail());
    if (s < 1.0 || cert.first < u.cell_scales().tail_start()) return false;
    for (std::size_t n = cert.first; n < cert.first + 8; ++n) {
      const double dn = static_cast<double>(n);
      const ModularValue c =
          reciprocal_cell(s * harmonic_cell_height(n), 1.0 / (dn + 1.0), 1.0 / dn, n, 1e-12, cfg);
      if (!c.is_finite() || c.value() + c.error_bound() < 1.0 / (dn + 1.0)) return false;
    }
    return true;
  }
  if (cert.kind == Kind::OverflowCap) {
    if (u.form() == PiecewiseFunction::Form::Pieces && cert.index < u.values().size()) {
      const double l = u.breakpoints()[cert.index];
      return l > 0.0 && std::log(std::abs(u.values()[cert.index])) / l > cap(cfg);
    }
    if (u.form() == PiecewiseFunction::Form::HarmonicCells && cert.index >= 1) {
      const double dn = static_cast<double>(cert.index);
      const double theta = std::abs(u.cell_scales().at(cert.index)) * harmonic_cell_height(cert.index);
      return std::log(theta) * (dn + 1.0) > cap(cfg);
    }
  }
  return false;
}

}  // namespace modtop
