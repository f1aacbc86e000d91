#pragma once

#include <string>

#include "json.hpp"
#include "modtop/diagnostics.hpp"
#include "modtop/dirichlet.hpp"
#include "modtop/luxemburg.hpp"

namespace modtop::cli {

using Json = nlohmann::ordered_json;

/// Finite doubles as numbers; infinities and NaN as the strings "inf",
/// "-inf" and "nan".
Json number(double v);
/// Same encoding for CSV cells, shortest round-trip form.
std::string csv_number(double v);

Json to_json(const InfiniteCertificate& c);
/// {"status": "finite", "value": v, "error_bound": e}, or
/// {"status": "infinite", "value": "inf", "certificate": {...}}, or
/// {"status": "indeterminate", "lower_bound": b, "reason": r}
Json to_json(const ModularValue& v);
Json to_json(const NormResult& r);
Json to_json(const RelationReport& r);
Json to_json(const Delta2Verdict& v);
Json to_json(const Check& c);
Json to_json(const ScenarioReport& r);

}  // namespace modtop::cli
