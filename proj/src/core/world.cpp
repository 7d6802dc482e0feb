#include "core/world.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/vecmath.hpp"

namespace driftbench {

ClassPool sample_class_pool(const WorldConfig& config) {
  if (config.pool_size <= 0) fail(errc::config, "pool_size must be positive");
  if (config.dim <= 0) fail(errc::config, "dim must be positive");
  Rng rng(derive_seed(config.seed, kStreamPool));
  ClassPool pool;
  pool.means.reserve(config.pool_size);
  for (int c = 0; c < config.pool_size; ++c)
    pool.means.push_back(rng.normal_vector(config.dim, 1.0));
  return pool;
}

namespace {

// Exact-count label mask with a coverage guarantee: every class that appears
// in the frames gets at least one labeled frame when the budget allows.
// Bounded reshuffles first; if coverage still fails, labels are moved from the
// most-labeled class deterministically.
std::vector<bool> label_mask(const std::vector<ClassId>& frame_classes, int label_count,
                             std::size_t class_count, Rng& rng) {
  const std::size_t t_count = frame_classes.size();
  std::vector<int> order(t_count);
  for (std::size_t i = 0; i < t_count; ++i) order[i] = static_cast<int>(i);

  auto mask_of = [&](const std::vector<int>& o) {
    std::vector<bool> mask(t_count, false);
    for (int i = 0; i < label_count; ++i) mask[o[i]] = true;
    return mask;
  };
  auto uncovered = [&](const std::vector<bool>& mask) {
    std::map<ClassId, int> labeled_per_class;
    for (std::size_t t = 0; t < t_count; ++t)
      if (mask[t]) ++labeled_per_class[frame_classes[t]];
    std::vector<ClassId> missing;
    for (std::size_t t = 0; t < t_count; ++t) {
      ClassId c = frame_classes[t];
      if (!labeled_per_class.count(c)) {
        labeled_per_class[c] = 0;
        missing.push_back(c);
      }
    }
    std::sort(missing.begin(), missing.end());
    return missing;
  };

  rng.shuffle(order);
  std::vector<bool> mask = mask_of(order);
  const bool want_coverage = label_count >= static_cast<int>(class_count);
  if (!want_coverage) return mask;

  for (int attempt = 0; attempt < 64 && !uncovered(mask).empty(); ++attempt) {
    rng.shuffle(order);
    mask = mask_of(order);
  }

  // Deterministic repair: take a label away from the class holding the most
  // and give it to the missing class's earliest frame.
  for (std::vector<ClassId> missing = uncovered(mask); !missing.empty();
       missing = uncovered(mask)) {
    ClassId need = missing.front();
    std::map<ClassId, int> counts;
    for (std::size_t t = 0; t < t_count; ++t)
      if (mask[t]) ++counts[frame_classes[t]];
    ClassId donor = -1;
    int best = 1;
    for (const auto& [c, n] : counts) {
      if (n > best) {
        best = n;
        donor = c;
      }
    }
    if (donor < 0) break;  // every labeled class has exactly one; budget exhausted
    for (std::size_t t = t_count; t-- > 0;) {
      if (mask[t] && frame_classes[t] == donor) {
        mask[t] = false;
        break;
      }
    }
    for (std::size_t t = 0; t < t_count; ++t) {
      if (!mask[t] && frame_classes[t] == need) {
        mask[t] = true;
        break;
      }
    }
  }
  return mask;
}

}  // namespace

Environment sample_environment(const ClassPool& pool, const std::vector<ClassId>* prev_classes,
                               const WorldConfig& config, Rng& rng, int env_index,
                               int t_offset) {
  if (config.classes_per_env > config.pool_size)
    fail(errc::config, "classes_per_env exceeds pool_size");
  const int dim = config.dim;
  const int t_count = config.frames_per_env;

  // Draw order is part of the format contract:
  // (1) retention uniforms, (2) refill picks, (3) context shift, (4) per-class
  // jitter, (5) frame classes, (6) frame noise, (7) label shuffles.
  std::vector<ClassId> class_set;
  if (prev_classes != nullptr) {
    std::vector<ClassId> prev_sorted = *prev_classes;
    std::sort(prev_sorted.begin(), prev_sorted.end());
    for (ClassId c : prev_sorted)
      if (rng.next_double() < config.persist_prob) class_set.push_back(c);
  }
  std::vector<ClassId> available;
  for (int c = 0; c < config.pool_size; ++c)
    if (std::find(class_set.begin(), class_set.end(), c) == class_set.end())
      available.push_back(c);
  while (static_cast<int>(class_set.size()) < config.classes_per_env) {
    uint32_t pick = rng.next_below(static_cast<uint32_t>(available.size()));
    class_set.push_back(available[pick]);
    available.erase(available.begin() + pick);
  }
  std::sort(class_set.begin(), class_set.end());

  std::vector<double> context_shift = rng.normal_vector(dim, config.context_sigma);

  std::map<ClassId, std::vector<double>> jitter;
  for (ClassId c : class_set) jitter[c] = rng.normal_vector(dim, config.instance_sigma);

  std::vector<ClassId> frame_classes(t_count);
  for (int t = 0; t < t_count; ++t)
    frame_classes[t] = class_set[rng.next_below(static_cast<uint32_t>(class_set.size()))];

  std::vector<std::vector<double>> noise(t_count);
  for (int t = 0; t < t_count; ++t) noise[t] = rng.normal_vector(dim, config.noise_sigma);

  const int label_count =
      static_cast<int>(std::lround(config.label_fraction * static_cast<double>(t_count)));
  std::vector<bool> labeled = label_mask(frame_classes, label_count, class_set.size(), rng);

  Environment env;
  env.env_index = env_index;
  env.class_set = class_set;
  env.context_shift = context_shift;
  env.frames.reserve(t_count);
  for (int t = 0; t < t_count; ++t) {
    FeatureFrame f;
    f.t = t_offset + t;
    f.env_index = env_index;
    f.true_class = frame_classes[t];
    f.labeled = labeled[t];
    f.features = pool.means[frame_classes[t]];
    vec::axpy(1.0, jitter[frame_classes[t]], f.features);
    vec::axpy(1.0, context_shift, f.features);
    vec::axpy(1.0, noise[t], f.features);
    env.frames.push_back(std::move(f));
  }
  return env;
}

Episode sample_episode(const ClassPool& pool, const WorldConfig& config, uint64_t episode_seed) {
  Rng rng(episode_seed);
  Episode episode;
  episode.seed = episode_seed;
  episode.label_fraction = config.label_fraction;
  const std::vector<ClassId>* prev = nullptr;
  for (int e = 0; e < config.envs_per_episode; ++e) {
    episode.environments.push_back(
        sample_environment(pool, prev, config, rng, e, e * config.frames_per_env));
    prev = &episode.environments.back().class_set;
  }
  validate_episode(episode);
  return episode;
}

Episode sample_episode(const WorldConfig& config, uint64_t episode_seed) {
  return sample_episode(sample_class_pool(config), config, episode_seed);
}

}  // namespace driftbench
