#pragma once

#include <cstdint>
#include <string>

#include "core/common.hpp"

namespace driftbench {

struct WorldConfig {
  int dim = 512;
  int pool_size = 10;
  int classes_per_env = 5;
  double persist_prob = 0.5;
  int frames_per_env = 100;
  int envs_per_episode = 4;
  double label_fraction = 0.4;
  double noise_sigma = 0.1;
  double context_sigma = 1.0;
  double instance_sigma = 0.0;  // per-(class, environment) appearance jitter; 0 disables
  uint64_t seed = 1;
};

struct LearnerConfig {
  std::string name = "oap";  // base | lwf | oap | cpm-lite | proto-oml | upper-bound
  double learning_rate = 0.27;
  double lambda = 1.0;    // replay-term weight in the meta objective
  double lambda_d = 1.0;  // distillation weight
  double tau = 2.0;       // distillation temperature
  double alpha_min = 0.2;
  double decay = 0.05;
  std::string gate_mode = "recency";  // recency | count
  bool stop_grad_prototypes = false;
  std::string forgetting_denominator = "default";  // default | paper-literal
  bool forgetting_labeled_only = false;
  bool seen_includes_unlabeled = false;
};

struct EmbeddingConfig {
  int embed_dim = 16;
  int hidden_dim = 32;  // 0 selects a plain linear map
  bool use_bias = true;
};

struct TrainConfig {
  int pretrain_episodes = 12;
  int pretrain_epochs = 3;
  double pretrain_lr = 0.08;
  int meta_budget = 200;
  double meta_lr = 0.01;
};

struct RunSection {
  int episodes = 20;
  std::string split = "test";  // train | val | test
  int threads = 0;             // 0 = hardware concurrency
  std::string output_dir = "out";
};

struct DriftConfig {
  WorldConfig world;
  LearnerConfig learner;
  EmbeddingConfig embedding;
  TrainConfig train;
  RunSection run;
};

// Parses a strict key = value config file ([section] headers, #-comments,
// quoted strings, ints, reals, booleans). Unknown sections or keys, duplicate
// keys, and type mismatches are errors. Starts from the defaults above.
DriftConfig load_config_file(const std::string& path);

// Applies one "section.key=value" override; strings may be unquoted here.
void apply_set(DriftConfig& config, const std::string& spec);

// Range and cross-field checks; throws errc::config on violation.
void validate_config(const DriftConfig& config);

// Base seed for episode index i of the named split ("train"/"val"/"test").
// Splits occupy pairwise-disjoint index ranges of one shared stream.
uint64_t episode_seed(const DriftConfig& config, const std::string& split, uint64_t index);

// Canonicalizes a learner name (underscores to hyphens) and checks membership.
std::string canonical_learner_name(const std::string& name);

}  // namespace driftbench
