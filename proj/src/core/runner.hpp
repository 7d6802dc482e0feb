#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/config.hpp"
#include "core/embed.hpp"
#include "core/evaluator.hpp"
#include "core/metrics.hpp"

namespace driftbench {

struct RunOutput {
  std::string learner;
  std::vector<EpisodeResult> results;    // indexed by episode
  std::vector<EpisodeMetrics> episodes;  // same order
  Aggregate aggregate;
  nlohmann::json summary;
};

// Evaluates run.episodes episodes of the configured split, one fresh learner
// per episode, fanned out over a thread pool. Results are keyed by episode
// index, so the numbers are independent of the thread count.
RunOutput run_benchmark(const DriftConfig& config,
                        const std::optional<EmbeddingParams>& embedding, int threads_override);

// summary.json plus one prediction-log CSV per episode.
void write_run_outputs(const RunOutput& output, const std::string& out_dir);

// Episode files in the DBENCH1 format plus a manifest of seeds and checksums.
void generate_episodes(const DriftConfig& config, const std::string& out_dir);

}  // namespace driftbench
