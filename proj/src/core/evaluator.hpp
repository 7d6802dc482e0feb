#pragma once

#include <optional>
#include <vector>

#include "core/learners.hpp"
#include "core/types.hpp"

namespace driftbench {

struct EvalOptions {
  bool seen_includes_unlabeled = false;
  bool forgetting_labeled_only = false;
  bool contract_checks = false;  // double-predict probe and mutation hashes
};

struct PredictionRecord {
  int t = 0;
  int env_index = 0;
  ClassId true_class = 0;
  ClassId predicted = -1;  // -1 when the learner had nothing to predict with
  bool counted = false;
  bool correct = false;
};

struct EpisodeResult {
  std::vector<int> counted;                           // per environment
  std::vector<int> correct;                           // per environment
  std::vector<std::optional<double>> online;          // correct/counted per env
  std::vector<std::vector<std::optional<double>>> c;  // c[i][j] defined for j <= i
  std::vector<PredictionRecord> log;
};

// Predict-then-update streaming pass over one episode, with frozen-snapshot
// re-evaluation of every completed environment at each environment end.
EpisodeResult run_episode(Learner& learner, const Episode& episode, const EvalOptions& options);

}  // namespace driftbench
