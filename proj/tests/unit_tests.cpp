#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/compare.hpp"
#include "core/config.hpp"
#include "core/embed.hpp"
#include "core/episode_io.hpp"
#include "core/evaluator.hpp"
#include "core/learners.hpp"
#include "core/metrics.hpp"
#include "core/params_io.hpp"
#include "core/plot.hpp"
#include "core/rng.hpp"
#include "core/runner.hpp"
#include "core/summary.hpp"
#include "core/tape.hpp"
#include "core/train.hpp"
#include "core/types.hpp"
#include "core/vecmath.hpp"
#include "core/world.hpp"

using namespace driftbench;

namespace {

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "driftbench_unit";
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path scratch_file(const std::string& name) { return scratch_dir() / name; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

template <typename Fn>
errc thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const db_error& e) {
    return e.code();
  }
  FAIL("expected a db_error");
  return errc::runtime;
}

struct FrameSpec {
  ClassId cls;
  bool labeled;
  std::vector<double> features;
};

Episode make_episode(const std::vector<std::vector<FrameSpec>>& envs, double label_fraction) {
  Episode episode;
  episode.seed = 0;
  episode.label_fraction = label_fraction;
  const std::size_t dim = envs.at(0).at(0).features.size();
  int t = 0;
  for (std::size_t i = 0; i < envs.size(); ++i) {
    Environment env;
    env.env_index = static_cast<int>(i);
    env.context_shift.assign(dim, 0.0);
    std::set<ClassId> classes;
    for (const FrameSpec& spec : envs[i]) {
      FeatureFrame frame;
      frame.t = t++;
      frame.env_index = env.env_index;
      frame.features = spec.features;
      frame.true_class = spec.cls;
      frame.labeled = spec.labeled;
      classes.insert(spec.cls);
      env.frames.push_back(std::move(frame));
    }
    env.class_set.assign(classes.begin(), classes.end());
    episode.environments.push_back(std::move(env));
  }
  validate_episode(episode);
  return episode;
}

StreamEvent make_event(ClassId cls, bool labeled, std::vector<double> features) {
  StreamEvent event;
  event.frame.true_class = cls;
  event.frame.labeled = labeled;
  event.frame.features = std::move(features);
  if (labeled) event.revealed_label = cls;
  return event;
}

LearnerConfig learner_named(const std::string& name) {
  LearnerConfig config;
  config.name = name;
  return config;
}

WorldConfig tiny_world(uint64_t seed) {
  WorldConfig w;
  w.dim = 3;
  w.pool_size = 6;
  w.classes_per_env = 3;
  w.persist_prob = 0.5;
  w.frames_per_env = 10;
  w.envs_per_episode = 2;
  w.label_fraction = 0.5;
  w.noise_sigma = 0.2;
  w.context_sigma = 0.5;
  w.instance_sigma = 0.3;
  w.seed = seed;
  return w;
}

}  // namespace

TEST_CASE("vector kernels match hand-worked values") {
  std::vector<double> w = {1.0, 2.0, 3.0, 4.0};
  CHECK(vec::matvec(w, {1.0, 1.0}, 2, 2) == std::vector<double>{3.0, 7.0});

  std::vector<double> p;
  double loss = vec::softmax_cross_entropy({0.0, 0.0}, 0, &p);
  CHECK(loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));

  // Cosine of [1,1] against [1,0] through the normalize-then-dot path.
  std::vector<double> q = vec::l2_normalize({1.0, 1.0});
  CHECK(vec::dot(q, {1.0, 0.0}) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  // Softmax is stable for large logits and the zero vector normalizes to itself.
  std::vector<double> big = vec::softmax({1000.0, 1000.0});
  CHECK(big[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(vec::l2_normalize({0.0, 0.0}) == std::vector<double>{0.0, 0.0});

  CHECK(vec::argmax({1.0, 3.0, 3.0}) == 1);  // first maximum wins
  CHECK(vec::mean({0.5, 1.0}) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(vec::sample_std({0.1, 0.3}) == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
  CHECK(vec::sample_std({0.42}) == 0.0);

  // Soft cross-entropy against a direct evaluation of -sum q log softmax(z).
  std::vector<double> z = {0.3, -1.2, 0.7};
  std::vector<double> soft_q = {0.2, 0.5, 0.3};
  std::vector<double> sm = vec::softmax(z);
  double expected = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) expected -= soft_q[i] * std::log(sm[i]);
  CHECK(vec::soft_cross_entropy(z, soft_q) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("number formatting round-trips and rejects junk") {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    double v = (rng.next_double() - 0.5) * std::pow(10.0, static_cast<double>(i % 60) - 30.0);
    std::string s = format_double(v);
    CHECK(parse_double_exact(s, "test") == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK_THROWS_AS(format_double(std::numeric_limits<double>::infinity()), db_error);
  CHECK(thrown_code([] { parse_double_exact("1.5x", "t"); }) == errc::parse);
  CHECK(thrown_code([] { parse_double_exact("inf", "t"); }) == errc::parse);
  CHECK(thrown_code([] { parse_double_exact("nan", "t"); }) == errc::parse);
  CHECK(thrown_code([] { parse_int_exact("12.5", "t"); }) == errc::parse);
  CHECK(parse_int_exact("-42", "t") == -42);
  CHECK(parse_uint_exact("18446744073709551615", "t") == 18446744073709551615ull);

  // FNV-1a 64-bit reference vectors.
  CHECK(fnv1a64(std::string("")) == 0xcbf29ce484222325ull);
  CHECK(fnv1a64(std::string("a")) == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64(std::string("foobar")) == 0x85944171f73967e8ull);
}

TEST_CASE("rng streams are deterministic and well-ranged") {
  Rng a(123), b(123), c(124);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    uint64_t va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_diff = any_diff || va != c.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff);

  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    double d = r.next_double();
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
    CHECK(r.next_below(13) < 13);
  }
  CHECK(r.normal_vector(5, 2.0).size() == 5);

  std::set<uint64_t> derived;
  for (uint64_t i = 0; i < 100; ++i) derived.insert(derive_seed(42, i));
  CHECK(derived.size() == 100);
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
}

TEST_CASE("oap prototype is the running class mean") {
  auto learner = make_learner(learner_named("oap"), std::nullopt);
  learner->reset_for_episode();
  for (double v : {2.0, 4.0, 9.0}) learner->update(make_event(7, true, {v}));
  CHECK(learner->state_vector() == std::vector<double>{7.0, 3.0, 5.0});

  // Property check against a directly accumulated mean.
  auto many = make_learner(learner_named("oap"), std::nullopt);
  many->reset_for_episode();
  Rng rng(5);
  double sum0 = 0.0, sum1 = 0.0;
  int n = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> f = {rng.next_normal(), rng.next_normal()};
    if (rng.next_double() < 0.7) {
      sum0 += f[0];
      sum1 += f[1];
      ++n;
      many->update(make_event(3, true, f));
    } else {
      many->update(make_event(3, false, f));  // unlabeled: must not move the prototype
    }
  }
  std::vector<double> state = many->state_vector();
  REQUIRE(state.size() == 4);
  CHECK(state[1] == static_cast<double>(n));
  CHECK(state[2] == doctest::Approx(sum0 / n).epsilon(1e-12));
  CHECK(state[3] == doctest::Approx(sum1 / n).epsilon(1e-12));
}

TEST_CASE("recency gate blends by elapsed stream time") {
  LearnerConfig config = learner_named("cpm-lite");
  config.gate_mode = "recency";
  config.alpha_min = 0.1;
  config.decay = 1.0;
  auto learner = make_learner(config, std::nullopt);
  learner->reset_for_episode();

  learner->update(make_event(7, true, {1.0, 0.0}));
  learner->update(make_event(9, false, {0.0, 0.0}));
  learner->update(make_event(9, false, {0.0, 0.0}));
  // Three updates elapsed since class 7 was touched: alpha = 1/(1+1*3) = 0.25.
  learner->update(make_event(7, true, {0.0, 1.0}));
  CHECK(learner->state_vector() == std::vector<double>{7.0, 2.0, 0.75, 0.25});

  // With a huge decay the blend floors at alpha_min.
  config.decay = 1e9;
  config.alpha_min = 0.5;
  auto floored = make_learner(config, std::nullopt);
  floored->reset_for_episode();
  floored->update(make_event(1, true, {1.0}));
  floored->update(make_event(1, true, {0.0}));
  CHECK(floored->state_vector() == std::vector<double>{1.0, 2.0, 0.5});
}

TEST_CASE("gradient head takes the worked first step") {
  LearnerConfig config = learner_named("base");
  config.learning_rate = 1.0;
  auto learner = make_learner(config, std::nullopt);
  learner->reset_for_episode();

  // First labeled frame: single active class, softmax is already 1, zero grad.
  learner->update(make_event(1, true, {1.0, 0.0}));
  CHECK(learner->state_vector() == std::vector<double>{1.0, 0.0, 0.0});

  // Second class activates with a zero row; logits [0,0] give p = [1/2,1/2],
  // so the rows move by -lr * (p - onehot) * e = [-0.5e; +0.5e].
  learner->update(make_event(2, true, {1.0, 0.0}));
  CHECK(learner->state_vector() == std::vector<double>{1.0, 2.0, -0.5, 0.0, 0.5, 0.0});

  // Unlabeled events leave the head untouched.
  uint64_t before = learner_state_hash(*learner);
  learner->update(make_event(2, false, {3.0, -1.0}));
  CHECK(learner_state_hash(*learner) == before);

  // Before anything is learned the learner abstains.
  auto fresh = make_learner(config, std::nullopt);
  fresh->reset_for_episode();
  FeatureFrame frame;
  frame.features = {1.0, 0.0};
  CHECK_FALSE(fresh->predict(frame).argmax.has_value());
}

TEST_CASE("distillation loss adds the temperature-scaled penalty") {
  const double tau = 2.0, lambda_d = 1.0;
  std::vector<double> rows = {1.0, -1.0};  // two classes, dim 1
  std::vector<double> e = {1.0};
  std::vector<double> snap_probs = {0.5, 0.5};
  std::vector<std::size_t> snap_positions = {0, 1};

  std::vector<double> grad;
  double loss = lwf_loss(rows, 2, 1, e, 0, snap_positions, snap_probs, lambda_d, tau, &grad);

  // Direct scalar evaluation of CE + lambda_d * tau^2 * KL(q || softmax(z/tau)).
  double z0 = rows[0], z1 = rows[1];
  double ce = -std::log(std::exp(z0) / (std::exp(z0) + std::exp(z1)));
  double s0 = std::exp(z0 / tau) / (std::exp(z0 / tau) + std::exp(z1 / tau));
  double kl = 0.5 * std::log(0.5 / s0) + 0.5 * std::log(0.5 / (1.0 - s0));
  CHECK(loss == doctest::Approx(ce + lambda_d * tau * tau * kl).epsilon(1e-12));

  // Both loss functions agree with central differences.
  auto check_grad = [&](bool distill) {
    std::vector<double> g;
    if (distill)
      lwf_loss(rows, 2, 1, e, 0, snap_positions, snap_probs, lambda_d, tau, &g);
    else
      head_ce_loss(rows, 2, 1, e, 0, &g);
    auto f = [&](const std::vector<double>& theta) {
      return distill ? lwf_loss(theta, 2, 1, e, 0, snap_positions, snap_probs, lambda_d, tau,
                                nullptr)
                     : head_ce_loss(theta, 2, 1, e, 0, nullptr);
    };
    CHECK(grad_check(f, rows, g).max_rel_error < 1e-7);
  };
  check_grad(false);
  check_grad(true);

  // Empty snapshot or lambda_d = 0 reduces to the plain cross-entropy.
  CHECK(lwf_loss(rows, 2, 1, e, 0, {}, {}, lambda_d, tau, nullptr) ==
        head_ce_loss(rows, 2, 1, e, 0, nullptr));
  CHECK(lwf_loss(rows, 2, 1, e, 0, snap_positions, snap_probs, 0.0, tau, nullptr) ==
        head_ce_loss(rows, 2, 1, e, 0, nullptr));
}

TEST_CASE("seen set counts labeled occurrences strictly before t") {
  std::vector<StreamEvent> events = {make_event(1, true, {0.0}), make_event(2, false, {0.0}),
                                     make_event(2, true, {0.0})};
  CHECK(seen_set_after(events, 0).empty());
  CHECK(seen_set_after(events, 2) == std::set<ClassId>{1});
  CHECK(seen_set_after(events, 3) == std::set<ClassId>{1, 2});
  CHECK(seen_set_after(events, 2, /*include_unlabeled=*/true) == std::set<ClassId>{1, 2});
  CHECK_THROWS_AS(seen_set_after(events, 4), db_error);
}

TEST_CASE("online accuracy masks classes never labeled before prediction time") {
  // [A lab, A, B lab, B]: t0 and t2 are uncounted first appearances; t1 is a
  // correct counted prediction; t3's features sit closer to A's prototype.
  Episode episode = make_episode({{{1, true, {1.0, 0.0}},
                                   {1, false, {1.0, 0.0}},
                                   {2, true, {0.0, 1.0}},
                                   {2, false, {1.0, 0.1}}}},
                                 0.5);
  auto learner = make_learner(learner_named("oap"), std::nullopt);
  EvalOptions options;
  options.contract_checks = true;
  EpisodeResult result = run_episode(*learner, episode, options);

  CHECK(result.counted == std::vector<int>{2});
  CHECK(result.correct == std::vector<int>{1});
  REQUIRE(result.online[0].has_value());
  CHECK(*result.online[0] == 0.5);

  // The per-frame log agrees with a post-hoc seen-set recomputation.
  std::vector<StreamEvent> events = iterate_episode(episode);
  for (std::size_t t = 0; t < events.size(); ++t) {
    bool expected = seen_set_after(events, t).count(events[t].frame.true_class) > 0;
    CHECK(result.log[t].counted == expected);
  }
}

namespace {

// Test double that records the call sequence it receives.
class SpyLearner final : public Learner {
 public:
  void reset_for_episode() override { calls_.push_back("reset"); }
  Prediction predict(const FeatureFrame& frame) const override {
    calls_.push_back("predict:" + std::to_string(frame.t));
    std::map<ClassId, double> scores;
    scores[frame.true_class] = 1.0;  // always right, so every counted frame scores
    return make_prediction(std::move(scores));
  }
  void update(const StreamEvent& event) override {
    calls_.push_back("update:" + std::to_string(event.frame.t));
  }
  void on_environment_start(int env_index) override {
    calls_.push_back("env:" + std::to_string(env_index));
  }
  std::unique_ptr<Learner> clone() const override { return std::make_unique<SpyLearner>(*this); }
  std::vector<double> state_vector() const override { return {}; }

  const std::vector<std::string>& calls() const { return calls_; }

 private:
  mutable std::vector<std::string> calls_;
};

}  // namespace

TEST_CASE("evaluator predicts before updating, env by env") {
  Episode episode = make_episode({{{1, true, {1.0}}, {1, false, {1.0}}},
                                  {{2, true, {2.0}}, {2, false, {2.0}}}},
                                 0.5);
  SpyLearner spy;
  EpisodeResult result = run_episode(spy, episode, EvalOptions{});

  const std::vector<std::string>& calls = spy.calls();
  REQUIRE(calls.size() >= 10);
  CHECK(calls[0] == "reset");
  CHECK(calls[1] == "env:0");
  CHECK(calls[2] == "predict:0");
  CHECK(calls[3] == "update:0");
  CHECK(calls[4] == "predict:1");
  CHECK(calls[5] == "update:1");
  CHECK(calls[6] == "env:1");

  // The always-right spy is perfect on every counted frame and forgets nothing.
  CHECK(*result.online[0] == 1.0);
  CHECK(*result.online[1] == 1.0);
  CHECK(*result.c[1][0] == 1.0);
}

TEST_CASE("forgetting metrics reproduce the worked matrix") {
  std::vector<std::vector<std::optional<double>>> c = {
      {0.9}, {0.7, 0.8}, {0.6, 0.8, 0.9}};
  ForgettingMetrics m = forgetting_metrics(c);
  CHECK(*m.fff[1][0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(*m.fff[2][0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(*m.fff[2][1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_FALSE(m.ff[0].has_value());
  CHECK(*m.ff[1] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(*m.ff[2] == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(*m.f_avg_default == doctest::Approx(0.175).epsilon(1e-15));
  CHECK(*m.f_avg_paper_literal == doctest::Approx(0.35 / 3.0).epsilon(1e-12));

  // Undefined entries are skipped, never treated as zero.
  std::vector<std::vector<std::optional<double>>> gappy = {
      {0.9}, {std::nullopt, 0.8}, {0.6, 0.7, 0.9}};
  ForgettingMetrics g = forgetting_metrics(gappy);
  CHECK_FALSE(g.ff[1].has_value());
  CHECK(*g.ff[2] == doctest::Approx((0.3 + 0.1) / 2.0).epsilon(1e-12));
  CHECK(*g.f_avg_default == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(*g.f_avg_paper_literal == doctest::Approx(0.1).epsilon(1e-12));

  // Single environment: no forgetting numbers at all.
  ForgettingMetrics one = forgetting_metrics({{0.5}});
  CHECK_FALSE(one.f_avg_default.has_value());
  CHECK_FALSE(one.f_avg_paper_literal.has_value());

  CHECK_THROWS_AS(forgetting_metrics({{0.5, 0.5}}), db_error);
}

TEST_CASE("aggregation uses sample std and skips undefined entries") {
  EpisodeMetrics a;
  a.online = {0.5, 1.0};
  a.online_avg = 0.75;
  a.ff = {std::nullopt, 0.1};
  a.f_avg = 0.1;
  a.f_avg_paper_literal = 0.05;
  EpisodeMetrics b = a;
  b.online = {0.9, std::nullopt};
  b.online_avg = 0.9;
  b.f_avg = 0.3;

  Aggregate agg = aggregate_metrics({a, b});
  CHECK(agg.episodes == 2);
  CHECK(*agg.online_avg_mean == doctest::Approx(0.825).epsilon(1e-15));
  CHECK(*agg.f_avg_mean == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(*agg.f_avg_std == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
  CHECK(*agg.online_per_env_mean[0] == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(*agg.online_per_env_mean[1] == doctest::Approx(1.0).epsilon(1e-15));

  Aggregate solo = aggregate_metrics({a});
  CHECK(solo.online_avg_mean.has_value());
  CHECK_FALSE(solo.online_avg_std.has_value());
  CHECK_FALSE(solo.f_avg_std.has_value());
}

TEST_CASE("meta learning rate decays at half and three-quarters budget") {
  CHECK(meta_lr_at(0, 4000, 1e-4) == 1e-4);
  CHECK(meta_lr_at(1999, 4000, 1e-4) == 1e-4);
  CHECK(meta_lr_at(2000, 4000, 1e-4) == doctest::Approx(1e-5).epsilon(1e-15));
  CHECK(meta_lr_at(2999, 4000, 1e-4) == doctest::Approx(1e-5).epsilon(1e-15));
  CHECK(meta_lr_at(3000, 4000, 1e-4) == doctest::Approx(1e-6).epsilon(1e-15));
  CHECK(meta_lr_at(3999, 4000, 1e-4) == doctest::Approx(1e-6).epsilon(1e-15));
}

TEST_CASE("world generator enforces its structural invariants") {
  WorldConfig w = tiny_world(11);
  Episode episode = sample_episode(w, 77);
  validate_episode(episode);
  CHECK(episode.environments.size() == 2);

  // Exactly round(rho * T) labels per environment, covering every class.
  for (const Environment& env : episode.environments) {
    int labels = 0;
    std::set<ClassId> labeled_classes;
    for (const FeatureFrame& f : env.frames) {
      if (f.labeled) {
        ++labels;
        labeled_classes.insert(f.true_class);
      }
    }
    CHECK(labels == 5);
    CHECK(labeled_classes.size() == env.class_set.size());
  }

  // persist_prob = 1 carries the whole class set forward.
  WorldConfig sticky = tiny_world(3);
  sticky.persist_prob = 1.0;
  sticky.envs_per_episode = 4;
  Episode stuck = sample_episode(sticky, 5);
  for (std::size_t i = 1; i < stuck.environments.size(); ++i)
    CHECK(stuck.environments[i].class_set == stuck.environments[0].class_set);

  // With all noise sources off, features are exactly the pool centroids.
  WorldConfig clean = tiny_world(19);
  clean.noise_sigma = 0.0;
  clean.context_sigma = 0.0;
  clean.instance_sigma = 0.0;
  ClassPool pool = sample_class_pool(clean);
  Episode pure = sample_episode(pool, clean, 123);
  for (const Environment& env : pure.environments)
    for (const FeatureFrame& f : env.frames)
      CHECK(f.features == pool.means[static_cast<std::size_t>(f.true_class)]);

  // Same seed, same episode; different seed, different draw.
  Episode again = sample_episode(w, 77);
  CHECK(episode_to_string(episode) == episode_to_string(again));
  CHECK(episode_to_string(episode) != episode_to_string(sample_episode(w, 78)));
}

TEST_CASE("class retention matches persist_prob on average") {
  // Presence in the next environment conflates retention with the refill
  // re-picking a dropped class; a large pool makes the return term negligible.
  WorldConfig w = tiny_world(101);
  w.dim = 2;
  w.pool_size = 1000;
  w.classes_per_env = 4;
  w.envs_per_episode = 2;
  w.persist_prob = 0.5;
  ClassPool pool = sample_class_pool(w);
  int kept = 0, total = 0;
  for (uint64_t s = 0; s < 1000; ++s) {
    Episode ep = sample_episode(pool, w, s);
    const auto& first = ep.environments[0].class_set;
    const auto& second = ep.environments[1].class_set;
    for (ClassId c : first) {
      ++total;
      if (std::find(second.begin(), second.end(), c) != second.end()) ++kept;
    }
  }
  double fraction = static_cast<double>(kept) / total;
  CHECK(fraction > 0.45);
  CHECK(fraction < 0.55);
}

TEST_CASE("episode seeds keep the splits disjoint") {
  DriftConfig config;
  std::set<uint64_t> seeds;
  for (uint64_t i = 0; i < 50; ++i) {
    seeds.insert(episode_seed(config, "test", i));
    seeds.insert(episode_seed(config, "train", i));
    seeds.insert(episode_seed(config, "val", i));
  }
  CHECK(seeds.size() == 150);
  CHECK(thrown_code([&] { episode_seed(config, "test", 1'000'000'000ull); }) == errc::config);
  CHECK(thrown_code([&] { episode_seed(config, "holdout", 0); }) == errc::config);
}

TEST_CASE("episode text format round-trips bit-exactly") {
  WorldConfig w = tiny_world(7);
  Episode episode = sample_episode(w, 4242);
  std::string text = episode_to_string(episode);
  Episode back = episode_from_string(text, "mem");

  REQUIRE(back.environments.size() == episode.environments.size());
  for (std::size_t i = 0; i < episode.environments.size(); ++i) {
    const Environment &orig = episode.environments[i], &copy = back.environments[i];
    CHECK(copy.class_set == orig.class_set);
    REQUIRE(copy.frames.size() == orig.frames.size());
    for (std::size_t t = 0; t < orig.frames.size(); ++t) {
      CHECK(copy.frames[t].features == orig.frames[t].features);  // bitwise
      CHECK(copy.frames[t].true_class == orig.frames[t].true_class);
      CHECK(copy.frames[t].labeled == orig.frames[t].labeled);
    }
  }
  CHECK(back.seed == episode.seed);
  CHECK(episode_to_string(back) == text);

  auto path = scratch_file("roundtrip.dbench");
  write_episode(episode, path.string());
  CHECK(episode_to_string(load_episode(path.string())) == text);
}

TEST_CASE("episode parser rejects malformed input") {
  WorldConfig w = tiny_world(7);
  w.frames_per_env = 2;
  w.label_fraction = 0.5;
  std::string good = episode_to_string(sample_episode(w, 1));

  auto code_for = [](const std::string& text) {
    return thrown_code([&] { episode_from_string(text, "bad"); });
  };
  CHECK(code_for("") == errc::parse);
  CHECK(code_for("NOTDBENCH D=2 N=1 T=2 rho=0.5 seed=1\n") == errc::parse);

  std::string crlf = good;
  crlf.insert(crlf.find('\n'), "\r");
  CHECK(code_for(crlf) == errc::parse);

  std::string truncated = good.substr(0, good.rfind('\n', good.size() - 2) + 1);
  CHECK(code_for(truncated) == errc::parse);
  CHECK(code_for(good + "extra line\n") == errc::parse);

  std::string bad_flag = good;
  // Frame lines are t,env,class,labeled,...; force labeled to 2 on line 2.
  std::size_t line2 = bad_flag.find('\n') + 1;
  std::size_t comma = line2;
  for (int i = 0; i < 3; ++i) comma = bad_flag.find(',', comma) + 1;
  bad_flag[comma] = '2';
  CHECK(code_for(bad_flag) == errc::parse);

  CHECK(thrown_code([] { load_episode("/nonexistent/ep.dbench"); }) == errc::io);
}

TEST_CASE("parameter files round-trip both shapes bit-exactly") {
  Rng rng(31);
  EmbeddingParams mlp = init_params(5, 3, 4, true, rng);
  EmbeddingParams linear = init_params(5, 3, 0, false, rng);

  for (const EmbeddingParams& p : {mlp, linear}) {
    std::string text = params_to_string(p);
    EmbeddingParams back = params_from_string(text, "mem");
    CHECK(back.input_dim == p.input_dim);
    CHECK(back.embed_dim == p.embed_dim);
    CHECK(back.hidden_dim == p.hidden_dim);
    CHECK(back.use_bias == p.use_bias);
    CHECK(back.w1 == p.w1);
    CHECK(back.b1 == p.b1);
    CHECK(back.w2 == p.w2);
    CHECK(back.b2 == p.b2);
    CHECK(params_to_string(back) == text);
  }

  auto path = scratch_file("roundtrip.dbp");
  write_params(mlp, path.string());
  CHECK(params_to_string(load_params(path.string())) == params_to_string(mlp));

  auto code_for = [](const std::string& text) {
    return thrown_code([&] { params_from_string(text, "bad"); });
  };
  CHECK(code_for("") == errc::parse);
  CHECK(code_for("DBPARAMS2 din=2 demb=2 hidden=0 bias=0\n1,0\n0,1\n") == errc::parse);
  CHECK(code_for("DBPARAMS1 din=2 demb=2 hidden=0 bias=0\n1,0\n") == errc::parse);
  CHECK(code_for("DBPARAMS1 din=2 demb=2 hidden=0 bias=0\n1,0\n0,1\nextra\n") == errc::parse);
  CHECK(code_for("DBPARAMS1 din=2 demb=2 hidden=0 bias=0\n1,0,0\n0,1\n") == errc::parse);
}

TEST_CASE("tape forward equals the plain forward bitwise") {
  Rng rng(17);
  for (int hidden : {0, 4}) {
    EmbeddingParams params = init_params(6, 3, hidden, hidden > 0, rng);
    for (int i = 0; i < 50; ++i) {
      std::vector<double> x = rng.normal_vector(6, 1.5);
      std::vector<double> plain = embed_forward(params, x);

      Tape tape;
      EmbeddingVars vars = stage_embedding(tape, params);
      Tape::Var y = embed_forward_tape(tape, params, vars, tape.input(x));
      CHECK(tape.value(y) == plain);
    }
  }
}

TEST_CASE("tape gradients pass central-difference checks") {
  Rng rng(23);

  // Composite: normalize(embed(x)) dotted against a prototype, into a CE over
  // two scores -- the same op mix the meta objective uses.
  EmbeddingParams params = init_params(4, 3, 3, true, rng);
  std::vector<double> x = rng.normal_vector(4, 1.0);
  std::vector<double> proto_a = rng.normal_vector(3, 1.0);
  std::vector<double> proto_b = rng.normal_vector(3, 1.0);
  std::vector<double> theta = params_to_vector(params);

  auto loss_at = [&](const std::vector<double>& flat, std::vector<double>* grad_out) {
    EmbeddingParams p = params;
    vector_to_params(flat, p);
    Tape tape;
    EmbeddingVars vars = stage_embedding(tape, p);
    Tape::Var q = tape.l2_normalize(embed_forward_tape(tape, p, vars, tape.input(x)));
    Tape::Var za = tape.dot(q, tape.input(proto_a));
    Tape::Var zb = tape.dot(q, tape.input(proto_b));
    Tape::Var loss = tape.softmax_cross_entropy(tape.concat({za, zb}), 0);
    if (grad_out) {
      tape.backward(loss);
      *grad_out = collect_gradient(tape, p, vars);
    }
    return tape.scalar(loss);
  };

  std::vector<double> analytic;
  loss_at(theta, &analytic);
  GradCheckReport report =
      grad_check([&](const std::vector<double>& t) { return loss_at(t, nullptr); }, theta,
                 analytic);
  CHECK(report.max_rel_error < 1e-7);

  // Soft cross-entropy, elementwise product, tanh, and scale round out the ops.
  std::vector<double> z0 = rng.normal_vector(4, 1.0);
  auto ops_loss = [&](const std::vector<double>& z, std::vector<double>* grad_out) {
    Tape tape;
    Tape::Var v = tape.input(z);
    Tape::Var t = tape.tanh(tape.mul(v, tape.scale(v, 0.5)));
    Tape::Var loss = tape.soft_cross_entropy(t, {0.1, 0.2, 0.3, 0.4});
    if (grad_out) {
      tape.backward(loss);
      *grad_out = tape.grad(v);
    }
    return tape.scalar(loss);
  };
  std::vector<double> ops_grad;
  ops_loss(z0, &ops_grad);
  CHECK(grad_check([&](const std::vector<double>& z) { return ops_loss(z, nullptr); }, z0,
                   ops_grad)
            .max_rel_error < 1e-7);

  // The zero vector's normalize subgradient is defined as zero.
  Tape tape;
  Tape::Var zero = tape.input({0.0, 0.0});
  Tape::Var root = tape.dot(tape.l2_normalize(zero), tape.input({1.0, 1.0}));
  tape.backward(root);
  CHECK(tape.grad(zero) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("reduction identities hold event by event") {
  WorldConfig w = tiny_world(57);
  Episode episode = sample_episode(w, 9);
  std::vector<StreamEvent> events = iterate_episode(episode);

  LearnerConfig lwf_off = learner_named("lwf");
  lwf_off.lambda_d = 0.0;
  auto lwf = make_learner(lwf_off, std::nullopt);
  auto base = make_learner(learner_named("base"), std::nullopt);

  LearnerConfig count_gate = learner_named("cpm-lite");
  count_gate.gate_mode = "count";
  auto cpm = make_learner(count_gate, std::nullopt);
  auto oap = make_learner(learner_named("oap"), std::nullopt);

  for (Learner* l : {lwf.get(), base.get(), cpm.get(), oap.get()}) l->reset_for_episode();
  int env = -1;
  for (const StreamEvent& event : events) {
    if (event.frame.env_index != env) {
      env = event.frame.env_index;
      for (Learner* l : {lwf.get(), base.get(), cpm.get(), oap.get()})
        l->on_environment_start(env);
    }
    for (Learner* l : {lwf.get(), base.get(), cpm.get(), oap.get()}) l->update(event);
    CHECK(lwf->state_vector() == base->state_vector());
    CHECK(cpm->state_vector() == oap->state_vector());
  }

  // And the distillation term does change lwf when enabled.
  LearnerConfig lwf_on = learner_named("lwf");
  auto lwf2 = make_learner(lwf_on, std::nullopt);
  auto base2 = make_learner(learner_named("base"), std::nullopt);
  for (Learner* l : {lwf2.get(), base2.get()}) {
    l->reset_for_episode();
    run_episode(*l, episode, EvalOptions{});
  }
  CHECK(learner_state_hash(*lwf2) != learner_state_hash(*base2));
}

TEST_CASE("clones are frozen snapshots") {
  WorldConfig w = tiny_world(71);
  Episode episode = sample_episode(w, 2);
  std::vector<StreamEvent> events = iterate_episode(episode);

  auto learner = make_learner(learner_named("oap"), std::nullopt);
  learner->reset_for_episode();
  for (int i = 0; i < 5; ++i) learner->update(events[i]);

  std::unique_ptr<Learner> snapshot = learner->clone();
  uint64_t frozen = learner_state_hash(*snapshot);
  FeatureFrame probe = events[0].frame;
  Prediction before = snapshot->predict(probe);

  for (const StreamEvent& event : events) learner->update(event);
  CHECK(learner_state_hash(*snapshot) == frozen);
  Prediction after = snapshot->predict(probe);
  CHECK(before.scores == after.scores);
  CHECK(learner_state_hash(*learner) != frozen);
}

TEST_CASE("predict is pure for every learner") {
  WorldConfig w = tiny_world(13);
  Episode episode = sample_episode(w, 3);
  Rng rng(1);
  EmbeddingParams mlp = init_params(w.dim, 4, 4, true, rng);

  for (const std::string& name : {"base", "lwf", "oap", "cpm-lite", "proto-oml", "upper-bound"}) {
    auto learner = make_learner(learner_named(name), mlp);
    EvalOptions options;
    options.contract_checks = true;  // double-predict probe + mutation hashes
    CHECK_NOTHROW(run_episode(*learner, episode, options));
  }
}

TEST_CASE("upper bound forgets everything at each environment start") {
  auto learner = make_learner(learner_named("upper-bound"), std::nullopt);
  learner->reset_for_episode();
  learner->on_environment_start(0);
  learner->update(make_event(1, true, {1.0, 0.0}));
  FeatureFrame probe;
  probe.features = {1.0, 0.0};
  CHECK(learner->predict(probe).argmax.has_value());
  learner->on_environment_start(1);
  CHECK_FALSE(learner->predict(probe).argmax.has_value());
}

TEST_CASE("replay-free meta objective matches online CE exactly at lambda zero") {
  WorldConfig w = tiny_world(29);
  Episode episode = sample_episode(w, 12);
  EmbeddingParams params = identity_params(w.dim);
  LearnerConfig learner = learner_named("proto-oml");
  learner.lambda = 0.0;

  std::vector<double> grad_ce, grad_replay;
  double a = meta_loss_value(params, episode, MetaObjective::OnlineCE, learner, &grad_ce);
  double b = meta_loss_value(params, episode, MetaObjective::ProtoReplay, learner, &grad_replay);
  CHECK(a == b);
  CHECK(grad_ce == grad_replay);

  learner.lambda = 1.0;
  double c = meta_loss_value(params, episode, MetaObjective::ProtoReplay, learner, nullptr);
  CHECK(c != a);  // the replay term contributes

  // Detaching prototypes changes the gradient but not the loss value.
  learner.stop_grad_prototypes = true;
  std::vector<double> grad_detached;
  double d = meta_loss_value(params, episode, MetaObjective::ProtoReplay, learner,
                             &grad_detached);
  CHECK(d == c);
  CHECK(grad_detached != grad_replay);
}

TEST_CASE("meta loss is an error when no labeled frame repeats a seen class") {
  Episode episode = make_episode({{{1, true, {1.0, 0.0}}, {2, true, {0.0, 1.0}}}}, 1.0);
  EmbeddingParams params = identity_params(2);
  CHECK(thrown_code([&] {
          meta_loss_value(params, episode, MetaObjective::OnlineCE, learner_named("proto-oml"));
        }) == errc::runtime);
}

TEST_CASE("meta training is deterministic and shrinks its own loss") {
  DriftConfig config;
  config.world = tiny_world(83);
  config.train.meta_budget = 40;
  config.train.meta_lr = 0.05;
  config.learner = learner_named("proto-oml");

  std::vector<double> trace1, trace2;
  EmbeddingParams p1 = meta_train_embedding(config, MetaObjective::ProtoReplay, &trace1);
  EmbeddingParams p2 = meta_train_embedding(config, MetaObjective::ProtoReplay, &trace2);
  CHECK(params_to_vector(p1) == params_to_vector(p2));
  CHECK(trace1 == trace2);
  REQUIRE(trace1.size() == 40);

  // Identity-initialized square map of the world dimension.
  CHECK(p1.input_dim == config.world.dim);
  CHECK(p1.embed_dim == config.world.dim);
  CHECK(p1.hidden_dim == 0);
  CHECK_FALSE(p1.use_bias);

  // Mean loss over the last quarter improves on the first quarter.
  auto mean_range = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += trace1[i];
    return s / static_cast<double>(hi - lo);
  };
  CHECK(mean_range(30, 40) < mean_range(0, 10));
}

TEST_CASE("pretraining fits the configured embedding shape deterministically") {
  DriftConfig config;
  config.world = tiny_world(91);
  config.embedding.embed_dim = 4;
  config.embedding.hidden_dim = 5;
  config.embedding.use_bias = true;
  config.train.pretrain_episodes = 2;
  config.train.pretrain_epochs = 2;
  config.train.pretrain_lr = 0.05;

  EmbeddingParams p1 = pretrain_embedding(config);
  EmbeddingParams p2 = pretrain_embedding(config);
  CHECK(params_to_vector(p1) == params_to_vector(p2));
  CHECK(p1.input_dim == config.world.dim);
  CHECK(p1.embed_dim == 4);
  CHECK(p1.hidden_dim == 5);
  CHECK(p1.use_bias);
  validate_params(p1);
}

TEST_CASE("config files parse strictly") {
  auto path = scratch_file("good.toml");
  write_text(path,
             "# benchmark settings\n"
             "[world]\n"
             "dim = 4  # inline comment\n"
             "noise_sigma = 0.25\n"
             "[learner]\n"
             "name = \"cpm-lite\"\n"
             "stop_grad_prototypes = true\n"
             "[run]\n"
             "split = \"val\"\n");
  DriftConfig config = load_config_file(path.string());
  CHECK(config.world.dim == 4);
  CHECK(config.world.noise_sigma == 0.25);
  CHECK(config.learner.name == "cpm-lite");
  CHECK(config.learner.stop_grad_prototypes);
  CHECK(config.run.split == "val");
  CHECK(config.world.pool_size == 10);  // untouched defaults survive

  auto expect_config_error = [&](const std::string& text) {
    auto bad = scratch_file("bad.toml");
    write_text(bad, text);
    CHECK(thrown_code([&] { load_config_file(bad.string()); }) == errc::config);
  };
  expect_config_error("[world]\nfoo = 1\n");                    // unknown key
  expect_config_error("[world]\ndim = 4\ndim = 5\n");           // duplicate
  expect_config_error("[learner]\nname = oap\n");               // unquoted string
  expect_config_error("dim = 4\n");                             // key outside section
  expect_config_error("[world\ndim = 4\n");                     // malformed header
  expect_config_error("[world]\ndim = four\n");                 // type mismatch
  CHECK(thrown_code([] { load_config_file("/nonexistent.toml"); }) == errc::io);
}

TEST_CASE("command-line overrides accept bare strings") {
  DriftConfig config;
  apply_set(config, "learner.name=cpm-lite");
  apply_set(config, "world.dim=16");
  apply_set(config, "run.split=train");
  CHECK(config.learner.name == "cpm-lite");
  CHECK(config.world.dim == 16);
  CHECK(config.run.split == "train");

  CHECK(thrown_code([&] { apply_set(config, "nonsense"); }) == errc::config);
  CHECK(thrown_code([&] { apply_set(config, "world.bogus=1"); }) == errc::config);
  CHECK(thrown_code([&] { apply_set(config, "dim=4"); }) == errc::config);
}

TEST_CASE("config validation flags out-of-range values") {
  auto expect_invalid = [](auto&& mutate) {
    DriftConfig config;
    mutate(config);
    CHECK(thrown_code([&] { validate_config(config); }) == errc::config);
  };
  expect_invalid([](DriftConfig& c) { c.world.dim = 0; });
  expect_invalid([](DriftConfig& c) { c.world.label_fraction = 1.5; });
  expect_invalid([](DriftConfig& c) { c.world.persist_prob = -0.1; });
  expect_invalid([](DriftConfig& c) { c.world.classes_per_env = c.world.pool_size + 1; });
  expect_invalid([](DriftConfig& c) { c.learner.name = "mystery"; });
  expect_invalid([](DriftConfig& c) { c.learner.tau = 0.0; });
  expect_invalid([](DriftConfig& c) { c.learner.gate_mode = "sometimes"; });
  expect_invalid([](DriftConfig& c) { c.run.split = "holdout"; });
  expect_invalid([](DriftConfig& c) { c.run.threads = -1; });

  DriftConfig fine;
  CHECK_NOTHROW(validate_config(fine));
  CHECK(canonical_learner_name("proto_oml") == "proto-oml");
  CHECK(canonical_learner_name("upper_bound") == "upper-bound");
  CHECK(thrown_code([] { canonical_learner_name("protonet"); }) == errc::config);
}

TEST_CASE("schema validation enforces the subset it claims") {
  nlohmann::json schema = {
      {"type", "object"},
      {"additionalProperties", false},
      {"required", {"name", "values"}},
      {"properties",
       {{"name", {{"type", "string"}, {"enum", {"alpha", "beta"}}}},
        {"values", {{"type", "array"}, {"items", {{"type", {"number", "null"}}}}}}}}};

  nlohmann::json good = {{"name", "alpha"}, {"values", {1.0, nullptr, 2.5}}};
  CHECK_NOTHROW(validate_against_schema(good, schema));

  auto expect_parse_error = [&](nlohmann::json doc) {
    CHECK(thrown_code([&] { validate_against_schema(doc, schema); }) == errc::parse);
  };
  expect_parse_error({{"name", "alpha"}});                                   // missing required
  expect_parse_error({{"name", "gamma"}, {"values", {1.0}}});                // enum
  expect_parse_error({{"name", "alpha"}, {"values", {"x"}}});                // item type
  expect_parse_error({{"name", "alpha"}, {"values", {1.0}}, {"x", 1}});      // extra key
  expect_parse_error({{"name", 5}, {"values", {1.0}}});                      // type
}

TEST_CASE("run summaries are complete, digested, and schema-stable") {
  DriftConfig config;
  config.world = tiny_world(37);
  config.run.episodes = 3;
  config.learner = learner_named("oap");
  RunOutput out = run_benchmark(config, std::nullopt, 1);

  const nlohmann::json& s = out.summary;
  CHECK(s.at("format") == "driftbench-summary-v1");
  CHECK(s.at("learner") == "oap");
  CHECK(s.at("per_episode").size() == 3);
  CHECK(s.at("aggregate").contains("online_avg_mean"));
  CHECK(s.at("aggregate").contains("f_avg_mean"));
  CHECK(s.at("config").at("world").at("seed") == 37);
  CHECK_FALSE(s.at("config").at("run").contains("threads"));
  CHECK_FALSE(s.at("config").at("run").contains("output_dir"));

  // The digest ignores the timestamp and pins everything else.
  nlohmann::json other = s;
  other["created_at"] = "1999-01-01T00:00:00Z";
  CHECK(summary_digest(other) == s.at("digest").get<std::string>());
  other["aggregate"]["online_avg_mean"] = 0.123;
  CHECK(summary_digest(other) != s.at("digest").get<std::string>());

  // Upper-bound runs do not report aggregate forgetting.
  config.learner = learner_named("upper-bound");
  RunOutput ub = run_benchmark(config, std::nullopt, 1);
  CHECK_FALSE(ub.summary.at("aggregate").contains("f_avg_mean"));
  CHECK_FALSE(ub.summary.at("aggregate").contains("f_avg_std"));
  CHECK(ub.summary.at("aggregate").contains("online_avg_mean"));
}

TEST_CASE("benchmark results do not depend on the thread count") {
  DriftConfig config;
  config.world = tiny_world(41);
  config.run.episodes = 5;
  config.learner = learner_named("cpm-lite");

  nlohmann::json one = run_benchmark(config, std::nullopt, 1).summary;
  nlohmann::json four = run_benchmark(config, std::nullopt, 4).summary;
  one.erase("created_at");
  four.erase("created_at");
  CHECK(one == four);
}

TEST_CASE("comparison uses the pooled standard deviation") {
  auto summary_with = [](std::vector<double> values) {
    nlohmann::json s;
    s["per_episode"] = nlohmann::json::array();
    for (double v : values) s["per_episode"].push_back({{"online_avg", v}});
    return s;
  };
  nlohmann::json a = summary_with({0.1, 0.2});
  nlohmann::json b = summary_with({0.5, 0.6});

  CompareResult r = compare_summaries(a, b, "online_avg", "<", 1.0);
  CHECK(r.pass);
  CHECK(r.mean_a == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(r.mean_b == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(r.pooled_std == doctest::Approx(std::sqrt(0.005)).epsilon(1e-12));
  CHECK(r.count_a == 2);
  CHECK(r.verdict.find("PASS") == 0);

  CHECK_FALSE(compare_summaries(a, b, "online_avg", ">", 0.5).pass);
  CHECK_FALSE(compare_summaries(a, b, "online_avg", "<", 10.0).pass);  // margin too wide

  CHECK(thrown_code([&] { compare_summaries(a, b, "bogus_metric", "<", 0.5); }) ==
        errc::invalid_argument);
  CHECK(thrown_code([&] { compare_summaries(a, b, "online_avg", "<=", 0.5); }) ==
        errc::invalid_argument);
  nlohmann::json single = summary_with({0.5});
  CHECK(thrown_code([&] { compare_summaries(single, b, "online_avg", "<", 0.5); }) ==
        errc::invalid_argument);
}

TEST_CASE("plots are rendered for every summary set") {
  DriftConfig config;
  config.world = tiny_world(53);
  config.run.episodes = 2;
  config.learner = learner_named("oap");
  nlohmann::json s1 = run_benchmark(config, std::nullopt, 1).summary;
  config.learner = learner_named("upper-bound");
  nlohmann::json s2 = run_benchmark(config, std::nullopt, 1).summary;

  auto dir = scratch_dir() / "plots";
  std::filesystem::remove_all(dir);
  write_plots({s1, s2}, dir.string());

  for (const char* name : {"online_accuracy_per_env", "forgetting_per_env", "final_env_scatter"}) {
    auto svg = dir / (std::string(name) + ".svg");
    auto csv = dir / (std::string(name) + ".csv");
    REQUIRE(std::filesystem::exists(svg));
    REQUIRE(std::filesystem::exists(csv));
    std::ifstream in(svg);
    std::string first;
    std::getline(in, first);
    CHECK(first.find("<svg") != std::string::npos);
  }
}

TEST_CASE("episode generation writes a manifest with checksums") {
  DriftConfig config;
  config.world = tiny_world(61);
  config.run.episodes = 3;
  auto dir = scratch_dir() / "gen";
  std::filesystem::remove_all(dir);
  generate_episodes(config, dir.string());

  nlohmann::json manifest = load_json_file((dir / "manifest.json").string());
  CHECK(manifest.at("format") == "driftbench-manifest-v1");
  CHECK(manifest.at("episodes").size() == 3);
  for (const auto& entry : manifest.at("episodes")) {
    auto path = dir / entry.at("file").get<std::string>();
    REQUIRE(std::filesystem::exists(path));
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(buffer.str())));
    CHECK(entry.at("fnv1a64").get<std::string>() == hex);
    CHECK_NOTHROW(episode_from_string(buffer.str(), path.string()));
  }
}
