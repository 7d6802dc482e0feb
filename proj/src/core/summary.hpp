#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "core/config.hpp"
#include "core/metrics.hpp"

namespace driftbench {

// Assembles the run summary. created_at is the only volatile field; everything
// else is a pure function of (config, results). Upper-bound runs omit the
// aggregate forgetting numbers. Execution details (thread count, output paths)
// are deliberately not echoed so reruns compare byte-identical.
nlohmann::json build_summary(const DriftConfig& config, const std::string& learner_name,
                             const std::vector<EpisodeMetrics>& episodes, const Aggregate& agg,
                             const std::string& created_at);

// FNV-1a64 hex digest of the summary with created_at and digest removed.
std::string summary_digest(const nlohmann::json& summary);

std::string iso8601_now();

void write_json_file(const nlohmann::json& value, const std::string& path);
nlohmann::json load_json_file(const std::string& path);

// Minimal JSON-schema subset: type (string or list), enum, properties,
// required, additionalProperties (boolean), items (single schema). Violations
// throw with a JSON-pointer-style path.
void validate_against_schema(const nlohmann::json& instance, const nlohmann::json& schema);

}  // namespace driftbench
