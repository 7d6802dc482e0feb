#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace driftbench {

// Emits three figures from run summaries: per-environment online accuracy
// curves, per-environment forgetting curves, and a final-environment
// accuracy-versus-forgetting scatter. Each SVG gets a CSV of the same values.
void write_plots(const std::vector<nlohmann::json>& summaries, const std::string& out_dir);

}  // namespace driftbench
