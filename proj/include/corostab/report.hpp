#pragma once

#include <string>

#include <json.hpp>

#include "corostab/config.hpp"
#include "corostab/stability.hpp"

namespace corostab {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

/// Cross-route residuals gathered during a scan.
struct OracleStats {
  double q1_route_max = 0.0;    ///< max |Q1 (e-derivative route) - Q1 (Lambda route)|, relative
  double form_route_max = 0.0;  ///< max block vs tensorial form value at one random Edot per state, relative
  double sampling_gap_min = 0.0;  ///< min over states of (sampled - exact) CSP minimum
  std::size_t samples = 0;
};

Json config_to_json(const ScanConfig& config);
Json record_to_json(const StateRecord& record);
Json report_to_json(const ScanConfig& config, const AuditReport& report, const OracleStats& oracles);

/// Two-space indented JSON; floating-point numbers with 17 significant
/// digits, non-finite numbers as null. Deterministic for a given value.
std::string dump_json(const Json& value);
/// Throws SchemaError on malformed input.
Json parse_json(const std::string& text);

std::string report_to_csv(const AuditReport& report);

}  // namespace corostab
