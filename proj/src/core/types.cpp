#include "core/types.hpp"

#include <algorithm>
#include <cmath>

namespace driftbench {

void validate_episode(const Episode& episode) {
  if (episode.environments.empty()) fail(errc::invalid_argument, "episode has no environments");
  const std::size_t dim = episode.environments.front().frames.empty()
                              ? 0
                              : episode.environments.front().frames.front().features.size();
  const std::size_t frames_per_env = episode.environments.front().frames.size();
  if (frames_per_env == 0) fail(errc::invalid_argument, "environment has no frames");

  int expected_t = 0;
  for (std::size_t e = 0; e < episode.environments.size(); ++e) {
    const Environment& env = episode.environments[e];
    if (env.env_index != static_cast<int>(e))
      fail(errc::invalid_argument, "environment index mismatch at " + std::to_string(e));
    if (env.frames.size() != frames_per_env)
      fail(errc::invalid_argument, "environment " + std::to_string(e) + " has " +
                                       std::to_string(env.frames.size()) + " frames, expected " +
                                       std::to_string(frames_per_env));
    if (!std::is_sorted(env.class_set.begin(), env.class_set.end()) ||
        std::adjacent_find(env.class_set.begin(), env.class_set.end()) != env.class_set.end())
      fail(errc::invalid_argument, "class_set must be sorted and unique");
    int labeled = 0;
    for (const FeatureFrame& f : env.frames) {
      if (f.t != expected_t)
        fail(errc::invalid_argument, "frame index gap at t=" + std::to_string(f.t));
      ++expected_t;
      if (f.env_index != env.env_index)
        fail(errc::invalid_argument, "frame env_index mismatch at t=" + std::to_string(f.t));
      if (f.features.size() != dim)
        fail(errc::invalid_argument, "feature dimension mismatch at t=" + std::to_string(f.t));
      if (f.true_class < 0) fail(errc::invalid_argument, "negative class id");
      if (!std::binary_search(env.class_set.begin(), env.class_set.end(), f.true_class))
        fail(errc::invalid_argument,
             "frame class " + std::to_string(f.true_class) + " not in class_set");
      if (f.labeled) ++labeled;
    }
    const int want = static_cast<int>(
        std::lround(episode.label_fraction * static_cast<double>(frames_per_env)));
    if (labeled != want)
      fail(errc::invalid_argument, "environment " + std::to_string(e) + " has " +
                                       std::to_string(labeled) + " labeled frames, expected " +
                                       std::to_string(want));
  }
}

std::vector<StreamEvent> iterate_episode(const Episode& episode) {
  validate_episode(episode);
  std::vector<StreamEvent> events;
  events.reserve(episode.environments.size() * episode.environments.front().frames.size());
  for (const Environment& env : episode.environments) {
    for (const FeatureFrame& f : env.frames) {
      StreamEvent ev;
      ev.frame = f;
      if (f.labeled) ev.revealed_label = f.true_class;
      events.push_back(std::move(ev));
    }
  }
  return events;
}

std::set<ClassId> seen_set_after(const std::vector<StreamEvent>& events, std::size_t t,
                                 bool include_unlabeled) {
  if (t > events.size()) fail(errc::invalid_argument, "seen_set_after: t out of range");
  std::set<ClassId> seen;
  for (std::size_t i = 0; i < t; ++i) {
    if (events[i].frame.labeled || include_unlabeled) seen.insert(events[i].frame.true_class);
  }
  return seen;
}

}  // namespace driftbench
