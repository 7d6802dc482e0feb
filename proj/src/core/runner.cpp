#include "core/runner.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "core/episode_io.hpp"
#include "core/summary.hpp"
#include "core/world.hpp"

namespace driftbench {

namespace {

int resolve_threads(const DriftConfig& config, int threads_override) {
  int threads = threads_override > 0 ? threads_override : config.run.threads;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  return threads;
}

std::string episode_file_name(int index) {
  std::ostringstream name;
  name << "episode_" << std::setfill('0') << std::setw(4) << index << ".dbench";
  return name.str();
}

}  // namespace

RunOutput run_benchmark(const DriftConfig& config,
                        const std::optional<EmbeddingParams>& embedding,
                        int threads_override) {
  validate_config(config);
  const std::string learner_name = canonical_learner_name(config.learner.name);
  if (embedding) {
    validate_params(*embedding);
    if (embedding->input_dim != config.world.dim)
      fail(errc::config, "embedding input dimension " + std::to_string(embedding->input_dim) +
                             " does not match world.dim " + std::to_string(config.world.dim));
  }

  const ClassPool pool = sample_class_pool(config.world);
  const int k = config.run.episodes;
  EvalOptions options;
  options.seen_includes_unlabeled = config.learner.seen_includes_unlabeled;
  options.forgetting_labeled_only = config.learner.forgetting_labeled_only;

  RunOutput output;
  output.learner = learner_name;
  output.results.resize(k);
  output.episodes.resize(k);

  const int threads = std::min(resolve_threads(config, threads_override), k);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    while (true) {
      const int index = next.fetch_add(1);
      if (index >= k) return;
      try {
        const Episode episode =
            sample_episode(pool, config.world, episode_seed(config, config.run.split, index));
        std::unique_ptr<Learner> learner = make_learner(config.learner, embedding);
        output.results[index] = run_episode(*learner, episode, options);
        output.episodes[index] = episode_metrics(output.results[index]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (int i = 0; i < threads; ++i) workers.emplace_back(worker);
    for (std::thread& t : workers) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  output.aggregate = aggregate_metrics(output.episodes);
  output.summary =
      build_summary(config, learner_name, output.episodes, output.aggregate, iso8601_now());
  return output;
}

void write_run_outputs(const RunOutput& output, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_json_file(output.summary, out_dir + "/summary.json");
  for (std::size_t index = 0; index < output.results.size(); ++index) {
    std::ostringstream name;
    name << out_dir << "/episode_" << std::setfill('0') << std::setw(4) << index << ".csv";
    std::ofstream csv(name.str(), std::ios::binary);
    if (!csv) fail(errc::io, "cannot open for writing: " + name.str());
    csv << "t,env_index,true_class,predicted_class,counted,correct\n";
    for (const PredictionRecord& r : output.results[index].log) {
      csv << r.t << "," << r.env_index << "," << r.true_class << "," << r.predicted << ","
          << (r.counted ? 1 : 0) << "," << (r.correct ? 1 : 0) << "\n";
    }
    if (!csv) fail(errc::io, "write failed: " + name.str());
  }
}

void generate_episodes(const DriftConfig& config, const std::string& out_dir) {
  validate_config(config);
  std::filesystem::create_directories(out_dir);
  const ClassPool pool = sample_class_pool(config.world);

  nlohmann::json manifest;
  manifest["format"] = "driftbench-manifest-v1";
  manifest["split"] = config.run.split;
  manifest["episodes"] = nlohmann::json::array();
  for (int index = 0; index < config.run.episodes; ++index) {
    const uint64_t seed = episode_seed(config, config.run.split, index);
    const Episode episode = sample_episode(pool, config.world, seed);
    const std::string text = episode_to_string(episode);
    const std::string name = episode_file_name(index);
    std::ofstream out(out_dir + "/" + name, std::ios::binary);
    if (!out) fail(errc::io, "cannot open for writing: " + out_dir + "/" + name);
    out << text;
    if (!out) fail(errc::io, "write failed: " + out_dir + "/" + name);
    std::ostringstream checksum;
    checksum << std::hex << std::setfill('0') << std::setw(16) << fnv1a64(text);
    manifest["episodes"].push_back(nlohmann::json{
        {"file", name}, {"seed", seed}, {"fnv1a64", checksum.str()}});
  }
  write_json_file(manifest, out_dir + "/manifest.json");
}

}  // namespace driftbench
