#pragma once

#include <vector>

#include "core/config.hpp"
#include "core/embed.hpp"
#include "core/types.hpp"

namespace driftbench {

// Offline supervised pretraining of the frozen extractor used by the
// gradient-head learners: labeled frames pooled from train-split episodes, the
// [embedding]-shaped network plus a throwaway softmax head over the full class
// pool, plain SGD over seeded shuffles.
EmbeddingParams pretrain_embedding(const DriftConfig& config);

enum class MetaObjective { OnlineCE, ProtoReplay };

// Meta-training learning rate at a given episode: step decay by 10x at 50%
// and again at 75% of the budget.
double meta_lr_at(int episode_index, int budget, double base_lr);

// Full meta loss of one episode under the given extractor: the mean online
// cross-entropy of on-stream prototype predictions at labeled frames, plus,
// for ProtoReplay, lambda times the recomputed-prototype loss of every
// environment prefix from the second onward. grad_out (optional) receives
// d(loss)/d(params) in params_to_vector layout.
double meta_loss_value(const EmbeddingParams& params, const Episode& episode,
                       MetaObjective objective, const LearnerConfig& learner,
                       std::vector<double>* grad_out = nullptr);

// One Adam step per train-split episode; deterministic given the config seed.
// loss_trace (optional) receives the per-episode loss values.
EmbeddingParams meta_train_embedding(const DriftConfig& config, MetaObjective objective,
                                     std::vector<double>* loss_trace = nullptr);

}  // namespace driftbench
