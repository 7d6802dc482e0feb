#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "core/common.hpp"

namespace driftbench {

using ClassId = int32_t;

struct FeatureFrame {
  int t = 0;          // frame index within the episode, 0-based
  int env_index = 0;  // environment this frame belongs to
  std::vector<double> features;
  ClassId true_class = 0;
  bool labeled = false;
};

struct Environment {
  int env_index = 0;
  std::vector<FeatureFrame> frames;       // exactly T frames
  std::vector<ClassId> class_set;         // sorted, unique
  std::vector<double> context_shift;      // generator metadata, hidden from learners
};

struct Episode {
  std::vector<Environment> environments;  // exactly N environments
  uint64_t seed = 0;
  double label_fraction = 0.0;
};

struct StreamEvent {
  FeatureFrame frame;
  std::optional<ClassId> revealed_label;  // present iff frame.labeled
};

struct Prediction {
  std::map<ClassId, double> scores;  // exactly the learner's currently seen classes
  std::optional<ClassId> argmax;     // absent iff scores is empty
};

// Builds a Prediction from scores, breaking score ties by smallest ClassId.
inline Prediction make_prediction(std::map<ClassId, double> scores) {
  Prediction p;
  p.scores = std::move(scores);
  for (const auto& [cid, s] : p.scores) {
    if (!p.argmax || s > p.scores.at(*p.argmax)) p.argmax = cid;
  }
  return p;
}

// Structural validation of the episode invariants (frame counts, ordering,
// class membership, label bookkeeping).
void validate_episode(const Episode& episode);

// Flattens an episode into its N*T stream events, in frame order.
std::vector<StreamEvent> iterate_episode(const Episode& episode);

// Classes observed strictly before event index t. By default only labeled
// occurrences count; include_unlabeled switches to the any-occurrence reading.
std::set<ClassId> seen_set_after(const std::vector<StreamEvent>& events, std::size_t t,
                                 bool include_unlabeled = false);

}  // namespace driftbench
