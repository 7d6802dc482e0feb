#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "core/config.hpp"
#include "core/embed.hpp"
#include "core/types.hpp"

namespace driftbench {

// Single-owner mutable streaming learner. predict is side-effect free; clone
// produces a frozen deep copy that serves as the evaluation snapshot.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual void reset_for_episode() = 0;
  virtual Prediction predict(const FeatureFrame& frame) const = 0;
  virtual void update(const StreamEvent& event) = 0;
  virtual void on_environment_start(int env_index) = 0;
  virtual std::unique_ptr<Learner> clone() const = 0;

  // Learned state flattened to doubles (head rows / prototype table), used for
  // state-equality assertions and mutation probes. Bookkeeping that cannot
  // affect predictions is excluded.
  virtual std::vector<double> state_vector() const = 0;
};

uint64_t learner_state_hash(const Learner& learner);

// embedding == nullopt means the raw features are used as-is.
std::unique_ptr<Learner> make_learner(const LearnerConfig& config,
                                      std::optional<EmbeddingParams> embedding);

// Loss functions shared by the update rules and the gradient checks. rows is
// the flattened n_classes x dim head; class order is the sorted active list.
// grad_out, when given, receives d(loss)/d(rows) of the same shape.
double head_ce_loss(const std::vector<double>& rows, std::size_t n_classes, std::size_t dim,
                    const std::vector<double>& e, std::size_t label_idx,
                    std::vector<double>* grad_out);

// Cross-entropy plus the temperature-scaled distillation penalty against the
// frozen snapshot distribution. snap_positions maps each snapshot class to its
// index in the current active order; snap_probs is the snapshot's softened
// distribution over those classes.
double lwf_loss(const std::vector<double>& rows, std::size_t n_classes, std::size_t dim,
                const std::vector<double>& e, std::size_t label_idx,
                const std::vector<std::size_t>& snap_positions,
                const std::vector<double>& snap_probs, double lambda_d, double tau,
                std::vector<double>* grad_out);

}  // namespace driftbench
