#pragma once

#include <vector>

#include "core/config.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"

namespace driftbench {

struct ClassPool {
  std::vector<std::vector<double>> means;  // pool_size centroids of dimension D
};

// Centroids drawn i.i.d. from a unit isotropic Gaussian on the pool substream
// of config.seed, so every episode of a run shares one class pool.
ClassPool sample_class_pool(const WorldConfig& config);

// One environment: retention of prev_classes, refill from the pool, context
// shift, per-class appearance jitter, frames, and the exact-count label mask.
// prev_classes is null for the first environment. The rng draw order is fixed
// and documented in the implementation; changing it breaks stored episodes.
Environment sample_environment(const ClassPool& pool, const std::vector<ClassId>* prev_classes,
                               const WorldConfig& config, Rng& rng, int env_index, int t_offset);

Episode sample_episode(const ClassPool& pool, const WorldConfig& config, uint64_t episode_seed);
Episode sample_episode(const WorldConfig& config, uint64_t episode_seed);

}  // namespace driftbench
