#pragma once

#include <optional>
#include <vector>

#include "core/evaluator.hpp"

namespace driftbench {

// Mean over the defined entries; nullopt when none are defined.
std::optional<double> mean_defined(const std::vector<std::optional<double>>& values);

struct ForgettingMetrics {
  std::vector<std::vector<std::optional<double>>> fff;  // fff[i][j] = c[j][j] - c[i][j]
  std::vector<std::optional<double>> ff;                // mean over j < i; undefined at i = 0
  std::optional<double> f_avg_default;        // mean of ff over environments 2..N
  std::optional<double> f_avg_paper_literal;  // first term fixed at 0, divisor N
};

ForgettingMetrics forgetting_metrics(const std::vector<std::vector<std::optional<double>>>& c);

struct EpisodeMetrics {
  std::vector<std::optional<double>> online;
  std::optional<double> online_avg;
  std::vector<std::optional<double>> ff;
  std::optional<double> f_avg;
  std::optional<double> f_avg_paper_literal;
};

EpisodeMetrics episode_metrics(const EpisodeResult& result);

struct Aggregate {
  int episodes = 0;
  std::optional<double> online_avg_mean, online_avg_std;
  std::optional<double> f_avg_mean, f_avg_std;
  std::optional<double> f_avg_paper_literal_mean, f_avg_paper_literal_std;
  std::vector<std::optional<double>> online_per_env_mean;
  std::vector<std::optional<double>> ff_per_env_mean;
};

// Episode-level means and sample standard deviations (K-1 convention); std is
// omitted below two defined values. Undefined entries are skipped, never
// treated as zero.
Aggregate aggregate_metrics(const std::vector<EpisodeMetrics>& episodes);

}  // namespace driftbench
