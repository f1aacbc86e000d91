#include "modtop/cli/grammar.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "modtop/error.hpp"

namespace modtop::cli {

namespace {

[[noreturn]] void fail(std::string_view text, const std::string& why) {
  throw Error(ErrorCode::ConfigError, "cannot parse '" + std::string(text) + "': " + why);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool consume(std::string_view& s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) != prefix) return false;
  s.remove_prefix(prefix.size());
  return true;
}

double number(std::string_view whole, std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    fail(whole, "'" + std::string(s) + "' is not a finite number");
  }
  return v;
}

std::size_t index(std::string_view whole, std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail(whole, "'" + std::string(s) + "' is not an index");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

std::vector<double> numbers(std::string_view whole, std::string_view s) {
  std::vector<double> out;
  for (auto part : split(s, ',')) out.push_back(number(whole, part));
  return out;
}

struct Triple {
  std::string_view a, b, value;
};

// "[(a..b,v),(a..b,v)]" -> triples; "[]" -> none
std::vector<Triple> bracketed_runs(std::string_view whole, std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') fail(whole, "expected [...]");
  s = trim(s.substr(1, s.size() - 2));
  std::vector<Triple> out;
  while (!s.empty()) {
    if (s.front() != '(') fail(whole, "expected '('");
    const auto close = s.find(')');
    if (close == std::string_view::npos) fail(whole, "unbalanced '('");
    const auto body = s.substr(1, close - 1);
    const auto dots = body.find("..");
    const auto comma = body.rfind(',');
    if (dots == std::string_view::npos || comma == std::string_view::npos || comma < dots) {
      fail(whole, "expected (first..last,value)");
    }
    out.push_back({body.substr(0, dots), body.substr(dots + 2, comma - dots - 2),
                   body.substr(comma + 1)});
    s = trim(s.substr(close + 1));
    if (!s.empty()) {
      if (s.front() != ',') fail(whole, "expected ',' between runs");
      s = trim(s.substr(1));
    }
  }
  return out;
}

ExponentSpec named_custom(std::string_view whole, std::string_view name) {
  ExponentSpec::Flags f;
  f.monotone_nondecreasing = true;
  f.declared_unbounded = true;
  if (name == "log1p") {
    return ExponentSpec::custom_sequence(
        [](std::size_t n) { return 1.0 + std::log(static_cast<double>(n) + 1.0); }, f, "log1p");
  }
  if (name == "sqrt1p") {
    return ExponentSpec::custom_sequence(
        [](std::size_t n) { return 1.0 + std::sqrt(static_cast<double>(n)); }, f, "sqrt1p");
  }
  fail(whole, "unknown custom exponent (known: log1p, sqrt1p)");
}

template <class F>
auto rethrow_as_config(std::string_view whole, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(whole, e.what());
  }
}

}  // namespace

ExponentSpec parse_exponent(std::string_view text) {
  const std::string_view whole = text;
  std::string_view s = trim(text);
  return rethrow_as_config(whole, [&]() -> ExponentSpec {
    if (s == "identity") return ExponentSpec::affine(1.0, 0.0);
    if (consume(s, "table:")) return ExponentSpec::table(numbers(whole, s));
    if (consume(s, "affine:")) {
      const auto at = s.find('@');
      const auto coef = numbers(whole, s.substr(0, at));
      if (coef.size() != 2) fail(whole, "affine needs slope,intercept");
      if (at == std::string_view::npos) return ExponentSpec::affine(coef[0], coef[1]);
      const auto dom = numbers(whole, s.substr(at + 1));
      if (dom.size() != 2) fail(whole, "domain needs lo,hi");
      return ExponentSpec::affine_on(coef[0], coef[1], {dom[0], dom[1]});
    }
    if (consume(s, "reciprocal:")) {
      const auto dom = numbers(whole, s);
      if (dom.size() != 2) fail(whole, "reciprocal needs lo,hi");
      return ExponentSpec::reciprocal({dom[0], dom[1]});
    }
    if (consume(s, "piecewise:")) {
      const auto parts = split(s, ';');
      if (parts.size() != 2) fail(whole, "piecewise needs breakpoints;values");
      return ExponentSpec::piecewise(numbers(whole, parts[0]), numbers(whole, parts[1]));
    }
    if (consume(s, "custom:")) return named_custom(whole, trim(s));
    fail(whole, "unknown exponent kind");
  });
}

SequenceVec parse_sequence(std::string_view text) {
  const std::string_view whole = text;
  std::string_view s = trim(text);
  return rethrow_as_config(whole, [&]() -> SequenceVec {
    if (!consume(s, "runs=")) fail(whole, "expected runs=[...]");
    const auto semi = s.find(';');
    if (semi == std::string_view::npos) fail(whole, "expected ;tail=...");
    std::vector<Run> runs;
    for (const auto& t : bracketed_runs(whole, s.substr(0, semi))) {
      runs.push_back({index(whole, t.a), index(whole, t.b), number(whole, t.value)});
    }
    std::string_view tail = trim(s.substr(semi + 1));
    if (!consume(tail, "tail=")) fail(whole, "expected tail=zero or tail=const:c");
    double c = 0.0;
    if (consume(tail, "const:")) {
      c = number(whole, tail);
    } else if (trim(tail) != "zero") {
      fail(whole, "expected tail=zero or tail=const:c");
    }
    return SequenceVec::from_runs(std::move(runs), c);
  });
}

PiecewiseFunction parse_function(std::string_view text) {
  const std::string_view whole = text;
  std::string_view s = trim(text);
  return rethrow_as_config(whole, [&]() -> PiecewiseFunction {
    if (consume(s, "catalog=v")) {
      s = trim(s);
      if (s.empty()) return PiecewiseFunction::catalog_v();
      if (!consume(s, ";cells=")) fail(whole, "expected ;cells=<sequence>");
      return PiecewiseFunction::harmonic_cells(parse_sequence(s));
    }
    if (!consume(s, "pieces=")) fail(whole, "expected pieces=[...] or catalog=v");
    std::vector<double> breaks, values;
    for (const auto& t : bracketed_runs(whole, s)) {
      const double a = number(whole, t.a), b = number(whole, t.b);
      if (breaks.empty()) {
        breaks.push_back(a);
      } else if (a != breaks.back()) {
        fail(whole, "pieces must be contiguous");
      }
      breaks.push_back(b);
      values.push_back(number(whole, t.value));
    }
    return PiecewiseFunction::from_pieces(std::move(breaks), std::move(values));
  });
}

}  // namespace modtop::cli
