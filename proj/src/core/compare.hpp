#pragma once

#include <string>

#include "json.hpp"

namespace driftbench {

struct CompareResult {
  bool pass = false;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double pooled_std = 0.0;
  int count_a = 0;
  int count_b = 0;
  std::string verdict;  // one-line human-readable outcome
};

// Directional check between two run summaries: passes when mean_a lies on the
// requested side ("<" or ">") of mean_b by more than margin pooled standard
// deviations. metric is one of the per-episode summary fields (online_avg,
// f_avg, f_avg_paper_literal).
CompareResult compare_summaries(const nlohmann::json& a, const nlohmann::json& b,
                                const std::string& metric, const std::string& direction,
                                double margin);

}  // namespace driftbench
