#pragma once

#include <json.hpp>

#include <string>

#include "latmaj/classical.hpp"
#include "latmaj/construction.hpp"
#include "latmaj/design.hpp"
#include "latmaj/majorization.hpp"

namespace latmaj {

using Json = nlohmann::ordered_json;

/// 12 significant digits, the stable textual form of every real in JSON output.
std::string format_real(double value);
/// Fixed 4 decimals, the human-readable table form.
std::string format_fixed4(double value);

Json to_json(const PCVector& pc);
Json to_json(const CriterionReport& report);
Json to_json(const DiscrepancyValue& value);

/// One JSON object per line: {iter, i, t, j, delta, psi} per move (1-based
/// indices), then {final_psi, bound, terminated}.
std::string trace_jsonl(const DescentTrace& trace);

}  // namespace latmaj
