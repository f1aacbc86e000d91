#include "modtop/cli/report.hpp"

#include <charconv>
#include <cmath>

namespace modtop::cli {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Json to_json(const InfiniteCertificate& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["rule"] = c.rule;
  switch (c.kind) {
    case InfiniteCertificate::Kind::TermsNondecreasing:
      j["first"] = c.first;
      j["last"] = c.last;
      j["nonzero_only"] = c.nonzero_only;
      j["delta"] = number(c.delta);
      break;
    case InfiniteCertificate::Kind::OverflowCap:
      j["index"] = c.index;
      j["log_term"] = number(c.log_term);
      break;
    case InfiniteCertificate::Kind::AnalyticComparison:
      j["parameter"] = number(c.parameter);
      break;
  }
  return j;
}

Json to_json(const ModularValue& v) {
  Json j;
  if (v.is_finite()) {
    j["status"] = "finite";
    j["value"] = number(v.value());
    j["error_bound"] = number(v.error_bound());
  } else if (v.is_infinite()) {
    j["status"] = "infinite";
    j["value"] = "inf";
    j["certificate"] = to_json(v.certificate());
  } else {
    j["status"] = "indeterminate";
    j["lower_bound"] = number(v.lower_bound());
    j["reason"] = v.reason();
  }
  return j;
}

Json to_json(const NormResult& r) {
  Json j;
  j["value"] = number(r.value);
  j["lower"] = number(r.lower);
  j["upper"] = number(r.upper);
  j["bracket_width"] = number(r.bracket_width);
  j["evals_used"] = r.evals_used;
  j["membership"] =
      r.membership == NormResult::Membership::InSpace ? "in-space" : "not-in-space-within-probe";
  return j;
}

Json to_json(const RelationReport& r) {
  Json j;
  j["norm"] = number(r.norm);
  j["modular"] = to_json(r.modular);
  j["modular_at_norm"] = to_json(r.modular_at_norm);
  j["unit_ball_at_norm"] = r.unit_ball_at_norm;
  j["ball_equivalence"] = r.ball_equivalence;
  j["modular_below_norm"] = r.modular_below_norm;
  j["strict_equivalence_observed"] = r.strict_equivalence_observed;
  j["all_pass"] = r.all_pass;
  return j;
}

Json to_json(const Delta2Verdict& v) {
  Json j;
  j["bounded"] = v.bounded;
  j["p_sup"] = number(v.p_sup);
  if (v.witness) {
    const auto& w = *v.witness;
    Json wj;
    wj["element"] = std::visit([](const auto& e) { return e.describe(); }, w.element);
    wj["indices"] = w.indices;
    wj["modular"] = to_json(w.modular);
    wj["finite_bound"] = number(w.finite_bound);
    Json scaled = Json::array();
    for (const auto& s : w.scaled) {
      Json sj;
      sj["lambda"] = number(s.lambda);
      sj["modular"] = to_json(s.value);
      scaled.push_back(std::move(sj));
    }
    wj["scaled"] = std::move(scaled);
    j["witness"] = std::move(wj);
  }
  return j;
}

Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["passed"] = c.passed;
  j["value"] = number(c.value);
  j["bound"] = number(c.bound);
  if (c.modular) j["modular"] = to_json(*c.modular);
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

Json to_json(const ScenarioReport& r) {
  Json j;
  j["name"] = r.name;
  j["seed"] = r.seed;
  j["passed"] = r.passed();
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = std::move(checks);
  Json values = Json::object();
  for (const auto& [k, v] : r.values) values[k] = number(v);
  j["values"] = std::move(values);
  return j;
}

}  // namespace modtop::cli
