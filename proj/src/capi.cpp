#include "driftbench/driftbench.h"

#include <cstring>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/compare.hpp"
#include "core/episode_io.hpp"
#include "core/params_io.hpp"
#include "core/plot.hpp"
#include "core/runner.hpp"
#include "core/summary.hpp"
#include "core/train.hpp"
#include "core/world.hpp"

using namespace driftbench;

struct db_config {
  DriftConfig value;
};

struct db_episode {
  Episode value;
};

namespace {

thread_local std::string g_last_error;

db_status status_of(errc code) {
  switch (code) {
    case errc::invalid_argument:
      return DB_ERR_INVALID;
    case errc::io:
      return DB_ERR_IO;
    case errc::parse:
      return DB_ERR_PARSE;
    case errc::config:
      return DB_ERR_CONFIG;
    case errc::runtime:
      return DB_ERR_RUNTIME;
  }
  return DB_ERR_RUNTIME;
}

template <typename Fn>
db_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DB_OK;
  } catch (const db_error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DB_ERR_RUNTIME;
  }
}

db_status require(const void* p, const char* what) {
  if (p) return DB_OK;
  g_last_error = std::string(what) + " must not be null";
  return DB_ERR_INVALID;
}

// The run command's learner resolution: gradient heads must be given a
// pretrained file, prototype learners fall back to the identity embedding.
void run_command(const DriftConfig& base, const char* learner, const char* params_path,
                 int threads, const char* out_dir) {
  DriftConfig config = base;
  if (learner) config.learner.name = learner;
  const std::string name = canonical_learner_name(config.learner.name);
  config.learner.name = name;
  validate_config(config);

  std::optional<EmbeddingParams> params;
  if (params_path) {
    params = load_params(params_path);
  } else if (name == "base" || name == "lwf") {
    fail(errc::config, name + " needs a pretrained embedding: run 'driftbench pretrain "
                              "--config <file> --out params.dbp' and pass it via --params");
  }
  RunOutput output = run_benchmark(config, params, threads);
  write_run_outputs(output, out_dir);
}

}  // namespace

extern "C" {

const char* db_version(void) { return "0.1.0"; }

const char* db_last_error(void) { return g_last_error.c_str(); }

db_config* db_config_create(void) {
  return new db_config{};
}

db_config* db_config_load(const char* path) {
  if (!path) {
    g_last_error = "path must not be null";
    return nullptr;
  }
  db_config* out = nullptr;
  const db_status status = guarded([&] { out = new db_config{load_config_file(path)}; });
  return status == DB_OK ? out : nullptr;
}

db_status db_config_set(db_config* config, const char* key_value) {
  if (db_status s = require(config, "config"); s != DB_OK) return s;
  if (db_status s = require(key_value, "key_value"); s != DB_OK) return s;
  return guarded([&] { apply_set(config->value, key_value); });
}

void db_config_free(db_config* config) { delete config; }

db_episode* db_episode_sample(const db_config* config, uint64_t episode_seed) {
  if (!config) {
    g_last_error = "config must not be null";
    return nullptr;
  }
  db_episode* out = nullptr;
  const db_status status = guarded([&] {
    validate_config(config->value);
    out = new db_episode{sample_episode(config->value.world, episode_seed)};
  });
  return status == DB_OK ? out : nullptr;
}

db_episode* db_episode_load(const char* path) {
  if (!path) {
    g_last_error = "path must not be null";
    return nullptr;
  }
  db_episode* out = nullptr;
  const db_status status = guarded([&] { out = new db_episode{load_episode(path)}; });
  return status == DB_OK ? out : nullptr;
}

db_status db_episode_save(const db_episode* episode, const char* path) {
  if (db_status s = require(episode, "episode"); s != DB_OK) return s;
  if (db_status s = require(path, "path"); s != DB_OK) return s;
  return guarded([&] { write_episode(episode->value, path); });
}

void db_episode_free(db_episode* episode) { delete episode; }

int db_episode_envs(const db_episode* episode) {
  return episode ? static_cast<int>(episode->value.environments.size()) : 0;
}

int db_episode_frames_per_env(const db_episode* episode) {
  if (!episode || episode->value.environments.empty()) return 0;
  return static_cast<int>(episode->value.environments.front().frames.size());
}

int db_episode_dim(const db_episode* episode) {
  if (!episode || episode->value.environments.empty() ||
      episode->value.environments.front().frames.empty())
    return 0;
  return static_cast<int>(episode->value.environments.front().frames.front().features.size());
}

db_status db_episode_frame(const db_episode* episode, int t, int* env_index, int* class_id,
                           int* labeled, double* features, int features_len) {
  if (db_status s = require(episode, "episode"); s != DB_OK) return s;
  return guarded([&] {
    const int per_env = db_episode_frames_per_env(episode);
    const int total = db_episode_envs(episode) * per_env;
    if (t < 0 || t >= total) fail(errc::invalid_argument, "frame index out of range");
    const FeatureFrame& frame = episode->value.environments[t / per_env].frames[t % per_env];
    if (env_index) *env_index = frame.env_index;
    if (class_id) *class_id = frame.true_class;
    if (labeled) *labeled = frame.labeled ? 1 : 0;
    if (features) {
      if (features_len < static_cast<int>(frame.features.size()))
        fail(errc::invalid_argument, "features buffer too small");
      std::memcpy(features, frame.features.data(), frame.features.size() * sizeof(double));
    }
  });
}

db_status db_cmd_gen(const db_config* config, const char* out_dir) {
  if (db_status s = require(config, "config"); s != DB_OK) return s;
  if (db_status s = require(out_dir, "out_dir"); s != DB_OK) return s;
  return guarded([&] { generate_episodes(config->value, out_dir); });
}

db_status db_cmd_pretrain(const db_config* config, const char* out_path) {
  if (db_status s = require(config, "config"); s != DB_OK) return s;
  if (db_status s = require(out_path, "out_path"); s != DB_OK) return s;
  return guarded([&] { write_params(pretrain_embedding(config->value), out_path); });
}

db_status db_cmd_meta_train(const db_config* config, const char* out_path) {
  if (db_status s = require(config, "config"); s != DB_OK) return s;
  if (db_status s = require(out_path, "out_path"); s != DB_OK) return s;
  return guarded([&] {
    const std::string name = canonical_learner_name(config->value.learner.name);
    const MetaObjective objective =
        name == "proto-oml" ? MetaObjective::ProtoReplay : MetaObjective::OnlineCE;
    write_params(meta_train_embedding(config->value, objective), out_path);
  });
}

db_status db_cmd_run(const db_config* config, const char* learner, const char* params_path,
                     int threads, const char* out_dir) {
  if (db_status s = require(config, "config"); s != DB_OK) return s;
  if (db_status s = require(out_dir, "out_dir"); s != DB_OK) return s;
  return guarded([&] { run_command(config->value, learner, params_path, threads, out_dir); });
}

db_status db_cmd_plot(const char* const* summary_paths, int count, const char* out_dir) {
  if (db_status s = require(summary_paths, "summary_paths"); s != DB_OK) return s;
  if (db_status s = require(out_dir, "out_dir"); s != DB_OK) return s;
  return guarded([&] {
    if (count <= 0) fail(errc::invalid_argument, "plot needs at least one summary");
    std::vector<nlohmann::json> summaries;
    for (int i = 0; i < count; ++i) summaries.push_back(load_json_file(summary_paths[i]));
    write_plots(summaries, out_dir);
  });
}

db_status db_cmd_compare(const char* summary_a, const char* summary_b, const char* metric,
                         const char* direction, double margin, int* pass_out,
                         char* verdict_buf, size_t verdict_len) {
  if (db_status s = require(summary_a, "summary_a"); s != DB_OK) return s;
  if (db_status s = require(summary_b, "summary_b"); s != DB_OK) return s;
  if (db_status s = require(metric, "metric"); s != DB_OK) return s;
  if (db_status s = require(direction, "direction"); s != DB_OK) return s;
  return guarded([&] {
    const CompareResult result = compare_summaries(load_json_file(summary_a),
                                                   load_json_file(summary_b), metric,
                                                   direction, margin);
    if (pass_out) *pass_out = result.pass ? 1 : 0;
    if (verdict_buf && verdict_len > 0) {
      std::strncpy(verdict_buf, result.verdict.c_str(), verdict_len - 1);
      verdict_buf[verdict_len - 1] = '\0';
    }
  });
}

}  // extern "C"
