#include "core/learners.hpp"

#include <algorithm>
#include <cmath>

#include "core/vecmath.hpp"

namespace driftbench {

uint64_t learner_state_hash(const Learner& learner) {
  std::vector<double> state = learner.state_vector();
  return fnv1a64(state.data(), state.size() * sizeof(double));
}

double head_ce_loss(const std::vector<double>& rows, std::size_t n_classes, std::size_t dim,
                    const std::vector<double>& e, std::size_t label_idx,
                    std::vector<double>* grad_out) {
  if (rows.size() != n_classes * dim) fail(errc::invalid_argument, "head loss: bad rows size");
  if (label_idx >= n_classes) fail(errc::invalid_argument, "head loss: bad label index");
  std::vector<double> logits = vec::matvec(rows, e, n_classes, dim);
  std::vector<double> p;
  double loss = vec::softmax_cross_entropy(logits, label_idx, &p);
  if (grad_out) {
    grad_out->assign(rows.size(), 0.0);
    for (std::size_t k = 0; k < n_classes; ++k) {
      double coeff = p[k] - (k == label_idx ? 1.0 : 0.0);
      for (std::size_t j = 0; j < dim; ++j) (*grad_out)[k * dim + j] = coeff * e[j];
    }
  }
  return loss;
}

double lwf_loss(const std::vector<double>& rows, std::size_t n_classes, std::size_t dim,
                const std::vector<double>& e, std::size_t label_idx,
                const std::vector<std::size_t>& snap_positions,
                const std::vector<double>& snap_probs, double lambda_d, double tau,
                std::vector<double>* grad_out) {
  if (snap_positions.size() != snap_probs.size())
    fail(errc::invalid_argument, "lwf loss: snapshot size mismatch");
  if (tau <= 0.0) fail(errc::config, "lwf loss: tau must be positive");
  double loss = head_ce_loss(rows, n_classes, dim, e, label_idx, grad_out);
  if (snap_positions.empty() || lambda_d == 0.0) return loss;

  std::vector<double> logits = vec::matvec(rows, e, n_classes, dim);
  std::vector<double> z_soft(snap_positions.size());
  for (std::size_t m = 0; m < snap_positions.size(); ++m)
    z_soft[m] = logits[snap_positions[m]] / tau;
  std::vector<double> p_cur;
  double ce_soft = vec::soft_cross_entropy(z_soft, snap_probs, &p_cur);
  double entropy = 0.0;  // sum q ln q, the constant completing the KL divergence
  for (double q : snap_probs) entropy += q * std::log(q);
  loss += lambda_d * tau * tau * (entropy + ce_soft);
  if (grad_out) {
    for (std::size_t m = 0; m < snap_positions.size(); ++m) {
      double coeff = lambda_d * tau * (p_cur[m] - snap_probs[m]);
      for (std::size_t j = 0; j < dim; ++j)
        (*grad_out)[snap_positions[m] * dim + j] += coeff * e[j];
    }
  }
  return loss;
}

namespace {

class HeadLearner final : public Learner {
 public:
  HeadLearner(double lr, bool distill, double lambda_d, double tau,
              std::optional<EmbeddingParams> embedding)
      : lr_(lr),
        distill_(distill),
        lambda_d_(lambda_d),
        tau_(tau),
        embedding_(std::move(embedding)) {
    if (distill_ && tau_ <= 0.0) fail(errc::config, "lwf: tau must be positive");
  }

  void reset_for_episode() override {
    active_.clear();
    rows_.clear();
    snap_active_.clear();
    snap_rows_.clear();
    has_snapshot_ = false;
    dim_ = 0;
  }

  Prediction predict(const FeatureFrame& frame) const override {
    std::map<ClassId, double> scores;
    if (!active_.empty()) {
      std::vector<double> e = embed(frame.features);
      std::vector<double> logits = vec::matvec(rows_, e, active_.size(), dim_);
      for (std::size_t k = 0; k < active_.size(); ++k) scores[active_[k]] = logits[k];
    }
    return make_prediction(std::move(scores));
  }

  void update(const StreamEvent& event) override {
    if (!event.revealed_label) return;
    const ClassId label = *event.revealed_label;
    std::vector<double> e = embed(event.frame.features);
    if (dim_ == 0) dim_ = e.size();
    if (e.size() != dim_) fail(errc::invalid_argument, "head: embedding dimension changed");
    activate(label);
    const std::size_t label_idx = static_cast<std::size_t>(
        std::lower_bound(active_.begin(), active_.end(), label) - active_.begin());

    std::vector<double> grad;
    if (distill_ && has_snapshot_) {
      std::vector<double> z_snap =
          vec::matvec(snap_rows_, e, snap_active_.size(), dim_);
      for (double& z : z_snap) z /= tau_;
      std::vector<double> snap_probs = vec::softmax(z_snap);
      std::vector<std::size_t> snap_positions(snap_active_.size());
      for (std::size_t m = 0; m < snap_active_.size(); ++m)
        snap_positions[m] = static_cast<std::size_t>(
            std::lower_bound(active_.begin(), active_.end(), snap_active_[m]) -
            active_.begin());
      lwf_loss(rows_, active_.size(), dim_, e, label_idx, snap_positions, snap_probs,
               lambda_d_, tau_, &grad);
    } else {
      head_ce_loss(rows_, active_.size(), dim_, e, label_idx, &grad);
    }
    vec::axpy(-lr_, grad, rows_);
  }

  void on_environment_start(int env_index) override {
    if (distill_ && env_index > 0) {
      snap_active_ = active_;
      snap_rows_ = rows_;
      has_snapshot_ = true;
    }
  }

  std::unique_ptr<Learner> clone() const override {
    return std::make_unique<HeadLearner>(*this);
  }

  std::vector<double> state_vector() const override {
    std::vector<double> state;
    state.reserve(active_.size() * (dim_ + 1));
    for (ClassId c : active_) state.push_back(static_cast<double>(c));
    state.insert(state.end(), rows_.begin(), rows_.end());
    return state;
  }

 private:
  std::vector<double> embed(const std::vector<double>& x) const {
    return embedding_ ? embed_forward(*embedding_, x) : x;
  }

  void activate(ClassId c) {
    auto it = std::lower_bound(active_.begin(), active_.end(), c);
    if (it != active_.end() && *it == c) return;
    const std::size_t pos = static_cast<std::size_t>(it - active_.begin());
    active_.insert(it, c);
    rows_.insert(rows_.begin() + pos * dim_, dim_, 0.0);
  }

  double lr_;
  bool distill_;
  double lambda_d_;
  double tau_;
  std::optional<EmbeddingParams> embedding_;
  std::vector<ClassId> active_;  // sorted; rows_ holds one zero-initialized
  std::vector<double> rows_;     // row per active class, flattened n x dim
  std::size_t dim_ = 0;
  std::vector<ClassId> snap_active_;
  std::vector<double> snap_rows_;
  bool has_snapshot_ = false;
};

class ProtoLearner final : public Learner {
 public:
  enum class Gate { RunningMean, Recency };

  ProtoLearner(Gate gate, bool reset_on_env, double alpha_min, double decay,
               std::optional<EmbeddingParams> embedding)
      : gate_(gate),
        reset_on_env_(reset_on_env),
        alpha_min_(alpha_min),
        decay_(decay),
        embedding_(std::move(embedding)) {
    if (gate_ == Gate::Recency) {
      if (alpha_min_ <= 0.0 || alpha_min_ > 1.0)
        fail(errc::config, "recency gate: alpha_min must be in (0,1]");
      if (decay_ < 0.0) fail(errc::config, "recency gate: decay must be non-negative");
    }
  }

  void reset_for_episode() override {
    table_.clear();
    frame_counter_ = 0;
  }

  Prediction predict(const FeatureFrame& frame) const override {
    std::map<ClassId, double> scores;
    if (!table_.empty()) {
      std::vector<double> en = vec::l2_normalize(embed(frame.features));
      for (const auto& [cid, entry] : table_)
        scores[cid] = vec::dot(en, vec::l2_normalize(entry.p));
    }
    return make_prediction(std::move(scores));
  }

  void update(const StreamEvent& event) override {
    ++frame_counter_;
    if (!event.revealed_label) return;
    const ClassId label = *event.revealed_label;
    std::vector<double> e = embed(event.frame.features);
    auto it = table_.find(label);
    if (it == table_.end()) {
      table_[label] = Entry{std::move(e), 1, frame_counter_};
      return;
    }
    Entry& entry = it->second;
    if (gate_ == Gate::RunningMean) {
      std::vector<double> sum = vec::add(e, vec::scale(entry.p, static_cast<double>(entry.count)));
      entry.p = vec::scale(sum, 1.0 / static_cast<double>(entry.count + 1));
    } else {
      const uint64_t age = frame_counter_ - entry.last_update;
      const double alpha = std::max(alpha_min_, 1.0 / (1.0 + decay_ * static_cast<double>(age)));
      entry.p = vec::add(vec::scale(entry.p, 1.0 - alpha), vec::scale(e, alpha));
    }
    ++entry.count;
    entry.last_update = frame_counter_;
  }

  void on_environment_start(int) override {
    if (reset_on_env_) table_.clear();
  }

  std::unique_ptr<Learner> clone() const override {
    return std::make_unique<ProtoLearner>(*this);
  }

  std::vector<double> state_vector() const override {
    std::vector<double> state;
    for (const auto& [cid, entry] : table_) {
      state.push_back(static_cast<double>(cid));
      state.push_back(static_cast<double>(entry.count));
      state.insert(state.end(), entry.p.begin(), entry.p.end());
    }
    return state;
  }

 private:
  struct Entry {
    std::vector<double> p;
    int64_t count = 0;
    uint64_t last_update = 0;
  };

  std::vector<double> embed(const std::vector<double>& x) const {
    return embedding_ ? embed_forward(*embedding_, x) : x;
  }

  Gate gate_;
  bool reset_on_env_;
  double alpha_min_;
  double decay_;
  std::optional<EmbeddingParams> embedding_;
  std::map<ClassId, Entry> table_;
  uint64_t frame_counter_ = 0;
};

}  // namespace

std::unique_ptr<Learner> make_learner(const LearnerConfig& config,
                                      std::optional<EmbeddingParams> embedding) {
  const std::string name = canonical_learner_name(config.name);
  if (name == "base")
    return std::make_unique<HeadLearner>(config.learning_rate, false, 0.0, 1.0,
                                         std::move(embedding));
  if (name == "lwf")
    return std::make_unique<HeadLearner>(config.learning_rate, true, config.lambda_d,
                                         config.tau, std::move(embedding));
  if (name == "oap" || name == "proto-oml")
    return std::make_unique<ProtoLearner>(ProtoLearner::Gate::RunningMean, false, 1.0, 0.0,
                                          std::move(embedding));
  if (name == "cpm-lite") {
    const ProtoLearner::Gate gate = config.gate_mode == "count"
                                        ? ProtoLearner::Gate::RunningMean
                                        : ProtoLearner::Gate::Recency;
    if (config.gate_mode != "count" && config.gate_mode != "recency")
      fail(errc::config, "cpm-lite: gate_mode must be recency or count");
    return std::make_unique<ProtoLearner>(gate, false, config.alpha_min, config.decay,
                                          std::move(embedding));
  }
  if (name == "upper-bound")
    return std::make_unique<ProtoLearner>(ProtoLearner::Gate::RunningMean, true, 1.0, 0.0,
                                          std::move(embedding));
  fail(errc::config, "unknown learner: " + name);
}

}  // namespace driftbench
