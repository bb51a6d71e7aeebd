#pragma once

#include <string>

#include <json.hpp>

#include "thermosdp/optimize.hpp"

namespace thermosdp {

inline constexpr const char* kVersion = "0.1.0";

nlohmann::json to_json(const ScheduleSummary& schedule);
/// Every field of a solver report; deterministic given the report.
nlohmann::json to_json(const SolveReport& report);
nlohmann::json vector_json(const RealVector& v);

/// Pretty-printed JSON followed by a newline.
std::string dump(const nlohmann::json& doc);

}  // namespace thermosdp
