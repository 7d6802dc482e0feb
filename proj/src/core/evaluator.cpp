#include "core/evaluator.hpp"

#include <set>

namespace driftbench {

namespace {

bool predictions_equal(const Prediction& a, const Prediction& b) {
  return a.argmax == b.argmax && a.scores == b.scores;
}

}  // namespace

EpisodeResult run_episode(Learner& learner, const Episode& episode, const EvalOptions& options) {
  validate_episode(episode);
  const int n_envs = static_cast<int>(episode.environments.size());

  EpisodeResult result;
  result.counted.assign(n_envs, 0);
  result.correct.assign(n_envs, 0);
  result.online.assign(n_envs, std::nullopt);
  result.c.assign(n_envs, {});

  learner.reset_for_episode();
  std::set<ClassId> seen;
  for (int i = 0; i < n_envs; ++i) {
    learner.on_environment_start(i);
    const Environment& env = episode.environments[i];
    for (const FeatureFrame& frame : env.frames) {
      Prediction pred = learner.predict(frame);
      if (options.contract_checks) {
        Prediction again = learner.predict(frame);
        if (!predictions_equal(pred, again))
          fail(errc::runtime, "learner contract violation: predict is not repeatable at t=" +
                                  std::to_string(frame.t));
      }
      PredictionRecord record;
      record.t = frame.t;
      record.env_index = frame.env_index;
      record.true_class = frame.true_class;
      record.predicted = pred.argmax ? *pred.argmax : -1;
      record.counted = seen.count(frame.true_class) > 0;
      record.correct = pred.argmax && *pred.argmax == frame.true_class;
      if (record.counted) {
        ++result.counted[i];
        if (record.correct) ++result.correct[i];
      }
      result.log.push_back(record);

      if (frame.labeled || options.seen_includes_unlabeled) seen.insert(frame.true_class);
      StreamEvent event;
      event.frame = frame;
      if (frame.labeled) event.revealed_label = frame.true_class;
      learner.update(event);
    }
    if (result.counted[i] > 0)
      result.online[i] = static_cast<double>(result.correct[i]) / result.counted[i];

    // Frozen-snapshot accuracy on every completed environment, restricted to
    // classes seen so far. The snapshot is a deep copy, so the live learner is
    // untouched by construction; the hash probe asserts it anyway.
    const uint64_t live_hash = options.contract_checks ? learner_state_hash(learner) : 0;
    std::unique_ptr<Learner> snapshot = learner.clone();
    result.c[i].assign(i + 1, std::nullopt);
    for (int j = 0; j <= i; ++j) {
      int denom = 0;
      int numer = 0;
      for (const FeatureFrame& frame : episode.environments[j].frames) {
        if (options.forgetting_labeled_only && !frame.labeled) continue;
        if (!seen.count(frame.true_class)) continue;
        ++denom;
        Prediction pred = snapshot->predict(frame);
        if (pred.argmax && *pred.argmax == frame.true_class) ++numer;
      }
      if (denom > 0) result.c[i][j] = static_cast<double>(numer) / denom;
    }
    if (options.contract_checks && learner_state_hash(learner) != live_hash)
      fail(errc::runtime,
           "learner contract violation: state changed during forgetting evaluation");
  }
  return result;
}

}  // namespace driftbench
