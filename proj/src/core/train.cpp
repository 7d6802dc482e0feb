#include "core/train.hpp"

#include <cmath>
#include <map>

#include "core/rng.hpp"
#include "core/tape.hpp"
#include "core/vecmath.hpp"
#include "core/world.hpp"

namespace driftbench {

namespace {

struct ProtoVar {
  Tape::Var p = -1;
  int64_t count = 0;
};

// Cosine-score cross-entropy of one embedded frame against the table,
// target = the frame's own class. Detaches prototypes when stop_grad is set.
Tape::Var score_frame(Tape& tape, const std::map<ClassId, ProtoVar>& table, Tape::Var emb,
                      ClassId label, bool stop_grad) {
  Tape::Var en = tape.l2_normalize(emb);
  std::vector<Tape::Var> scores;
  std::size_t target = 0;
  std::size_t idx = 0;
  for (const auto& [cid, proto] : table) {
    Tape::Var p = stop_grad ? tape.input(tape.value(proto.p)) : proto.p;
    scores.push_back(tape.dot(en, tape.l2_normalize(p)));
    if (cid == label) target = idx;
    ++idx;
  }
  return tape.softmax_cross_entropy(tape.concat(scores), target);
}

void oap_update_var(Tape& tape, std::map<ClassId, ProtoVar>& table, ClassId label,
                    Tape::Var emb) {
  auto it = table.find(label);
  if (it == table.end()) {
    table[label] = ProtoVar{emb, 1};
    return;
  }
  ProtoVar& proto = it->second;
  Tape::Var sum = tape.add(emb, tape.scale(proto.p, static_cast<double>(proto.count)));
  proto.p = tape.scale(sum, 1.0 / static_cast<double>(proto.count + 1));
  ++proto.count;
}

Tape::Var mean_of(Tape& tape, const std::vector<Tape::Var>& terms) {
  Tape::Var acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = tape.add(acc, terms[i]);
  return tape.scale(acc, 1.0 / static_cast<double>(terms.size()));
}

Tape::Var build_meta_loss(Tape& tape, const EmbeddingParams& params, const EmbeddingVars& vars,
                          const Episode& episode, MetaObjective objective,
                          const LearnerConfig& learner) {
  const std::vector<StreamEvent> events = iterate_episode(episode);
  const bool stop_grad = learner.stop_grad_prototypes;

  std::map<int, Tape::Var> emb_cache;  // frame t -> embedded var
  auto embed_at = [&](const StreamEvent& ev) {
    auto it = emb_cache.find(ev.frame.t);
    if (it != emb_cache.end()) return it->second;
    Tape::Var x = tape.input(ev.frame.features);
    Tape::Var e = embed_forward_tape(tape, params, vars, x);
    emb_cache[ev.frame.t] = e;
    return e;
  };

  // On-stream pass: score each labeled frame against the prototypes built from
  // strictly earlier labeled frames, then fold the frame in.
  std::map<ClassId, ProtoVar> table;
  std::vector<Tape::Var> online_terms;
  for (const StreamEvent& ev : events) {
    if (!ev.revealed_label) continue;
    const ClassId label = *ev.revealed_label;
    Tape::Var e = embed_at(ev);
    if (table.count(label)) online_terms.push_back(score_frame(tape, table, e, label, stop_grad));
    oap_update_var(tape, table, label, e);
  }
  if (online_terms.empty())
    fail(errc::runtime, "online meta loss undefined: no labeled frame repeats a seen class");
  Tape::Var total = mean_of(tape, online_terms);

  if (objective == MetaObjective::ProtoReplay && learner.lambda > 0.0) {
    const int t_per_env = static_cast<int>(episode.environments.front().frames.size());
    const int n_envs = static_cast<int>(episode.environments.size());
    Tape::Var replay = -1;
    for (int i = 2; i <= n_envs; ++i) {
      const int limit = i * t_per_env;  // frames 0..limit-1
      std::map<ClassId, ProtoVar> replay_table;
      for (const StreamEvent& ev : events) {
        if (ev.frame.t >= limit) break;
        if (!ev.revealed_label) continue;
        oap_update_var(tape, replay_table, *ev.revealed_label, embed_at(ev));
      }
      std::vector<Tape::Var> terms;
      for (const StreamEvent& ev : events) {
        if (ev.frame.t >= limit) break;
        if (!ev.revealed_label) continue;
        terms.push_back(
            score_frame(tape, replay_table, embed_at(ev), *ev.revealed_label, stop_grad));
      }
      if (terms.empty())
        fail(errc::runtime, "replay loss undefined: no labeled frames in the first " +
                                std::to_string(i) + " environments");
      Tape::Var li = mean_of(tape, terms);
      replay = replay < 0 ? li : tape.add(replay, li);
    }
    total = tape.add(total, tape.scale(replay, learner.lambda));
  }
  return total;
}

}  // namespace

double meta_lr_at(int episode_index, int budget, double base_lr) {
  if (episode_index >= (3 * budget) / 4) return base_lr * 0.01;
  if (episode_index >= budget / 2) return base_lr * 0.1;
  return base_lr;
}

double meta_loss_value(const EmbeddingParams& params, const Episode& episode,
                       MetaObjective objective, const LearnerConfig& learner,
                       std::vector<double>* grad_out) {
  Tape tape;
  EmbeddingVars vars = stage_embedding(tape, params);
  Tape::Var loss = build_meta_loss(tape, params, vars, episode, objective, learner);
  if (grad_out) {
    tape.backward(loss);
    *grad_out = collect_gradient(tape, params, vars);
  }
  return tape.scalar(loss);
}

EmbeddingParams meta_train_embedding(const DriftConfig& config, MetaObjective objective,
                                     std::vector<double>* loss_trace) {
  validate_config(config);
  const WorldConfig& w = config.world;
  const ClassPool pool = sample_class_pool(w);
  EmbeddingParams params = identity_params(w.dim);

  std::vector<double> flat = params_to_vector(params);
  std::vector<double> m(flat.size(), 0.0);
  std::vector<double> v(flat.size(), 0.0);
  const double beta1 = 0.9;
  const double beta2 = 0.999;
  const double eps = 1e-8;
  const int budget = config.train.meta_budget;

  for (int ep = 0; ep < budget; ++ep) {
    const Episode episode = sample_episode(pool, w, episode_seed(config, "train", ep));
    Tape tape;
    EmbeddingVars vars = stage_embedding(tape, params);
    Tape::Var loss = build_meta_loss(tape, params, vars, episode, objective, config.learner);
    const double loss_value = tape.scalar(loss);
    if (!std::isfinite(loss_value))
      fail(errc::runtime, "meta training diverged at episode " + std::to_string(ep));
    if (loss_trace) loss_trace->push_back(loss_value);
    tape.backward(loss);
    const std::vector<double> grad = collect_gradient(tape, params, vars);

    const double lr = meta_lr_at(ep, budget, config.train.meta_lr);
    const double t = static_cast<double>(ep + 1);
    const double bias1 = 1.0 - std::pow(beta1, t);
    const double bias2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < flat.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
      flat[i] -= lr * (m[i] / bias1) / (std::sqrt(v[i] / bias2) + eps);
    }
    vector_to_params(flat, params);
  }
  return params;
}

EmbeddingParams pretrain_embedding(const DriftConfig& config) {
  validate_config(config);
  const WorldConfig& w = config.world;
  const ClassPool pool = sample_class_pool(w);
  Rng rng(derive_seed(w.seed, kStreamPretrain));
  EmbeddingParams params = init_params(w.dim, config.embedding.embed_dim,
                                       config.embedding.hidden_dim,
                                       config.embedding.use_bias, rng);

  struct Sample {
    std::vector<double> features;
    ClassId label;
  };
  std::vector<Sample> samples;
  for (int ep = 0; ep < config.train.pretrain_episodes; ++ep) {
    const Episode episode = sample_episode(pool, w, episode_seed(config, "train", ep));
    for (const Environment& env : episode.environments)
      for (const FeatureFrame& f : env.frames)
        if (f.labeled) samples.push_back(Sample{f.features, f.true_class});
  }
  if (samples.empty()) fail(errc::runtime, "pretraining found no labeled frames");

  std::vector<double> head(static_cast<std::size_t>(w.pool_size) * params.embed_dim, 0.0);
  std::vector<double> flat = params_to_vector(params);
  std::vector<int> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 0; epoch < config.train.pretrain_epochs; ++epoch) {
    rng.shuffle(order);
    for (int idx : order) {
      const Sample& sample = samples[idx];
      Tape tape;
      EmbeddingVars vars = stage_embedding(tape, params);
      Tape::Var head_var = tape.input(head);
      Tape::Var x = tape.input(sample.features);
      Tape::Var e = embed_forward_tape(tape, params, vars, x);
      Tape::Var logits = tape.matvec(head_var, e, w.pool_size, params.embed_dim);
      Tape::Var loss =
          tape.softmax_cross_entropy(logits, static_cast<std::size_t>(sample.label));
      if (!std::isfinite(tape.scalar(loss)))
        fail(errc::runtime, "pretraining diverged");
      tape.backward(loss);
      const std::vector<double> grad = collect_gradient(tape, params, vars);
      vec::axpy(-config.train.pretrain_lr, grad, flat);
      vec::axpy(-config.train.pretrain_lr, tape.grad(head_var), head);
      vector_to_params(flat, params);
    }
  }
  return params;
}

}  // namespace driftbench
