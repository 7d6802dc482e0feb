#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <driftbench/driftbench.h>

namespace {

constexpr int kExitError = 2;

[[noreturn]] void die(const std::string& context) {
  std::string message = db_last_error();
  if (message.empty()) message = "unknown error";
  std::fprintf(stderr, "error: %s: %s\n", context.c_str(), message.c_str());
  std::exit(kExitError);
}

void check(db_status status, const std::string& context) {
  if (status != DB_OK) die(context);
}

using ConfigPtr = std::unique_ptr<db_config, decltype(&db_config_free)>;

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<uint64_t> seed;
  std::optional<int> episodes;
};

void add_config_options(CLI::App& cmd, ConfigArgs& args) {
  cmd.add_option("--config", args.config_path, "Config file to load (defaults otherwise)");
  cmd.add_option("--set", args.sets, "Override as section.key=value (repeatable)");
  cmd.add_option("--seed", args.seed, "Shorthand for --set world.seed=<value>");
  cmd.add_option("--episodes", args.episodes, "Shorthand for --set run.episodes=<value>");
}

ConfigPtr build_config(const ConfigArgs& args) {
  db_config* raw = args.config_path.empty() ? db_config_create()
                                            : db_config_load(args.config_path.c_str());
  if (!raw) die("loading config");
  ConfigPtr config(raw, db_config_free);
  if (args.seed)
    check(db_config_set(config.get(), ("world.seed=" + std::to_string(*args.seed)).c_str()),
          "applying --seed");
  if (args.episodes)
    check(db_config_set(config.get(), ("run.episodes=" + std::to_string(*args.episodes)).c_str()),
          "applying --episodes");
  for (const std::string& kv : args.sets)
    check(db_config_set(config.get(), kv.c_str()), "applying --set " + kv);
  return config;
}

int threads_from_env() {
  const char* env = std::getenv("DRIFTBENCH_THREADS");
  if (!env || !*env) return 0;
  try {
    return std::stoi(env);
  } catch (const std::exception&) {
    std::fprintf(stderr, "error: DRIFTBENCH_THREADS is not an integer: %s\n", env);
    std::exit(kExitError);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftbench: few-shot online continual-learning benchmark"};
  app.set_version_flag("--version", db_version());
  app.require_subcommand(1);

  ConfigArgs gen_args;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Sample episodes and write them to a directory");
  add_config_options(*gen, gen_args);
  gen->add_option("--out", gen_out, "Output directory")->required();

  ConfigArgs pre_args;
  std::string pre_out;
  CLI::App* pretrain =
      app.add_subcommand("pretrain", "Fit the embedding on pooled labeled frames");
  add_config_options(*pretrain, pre_args);
  pretrain->add_option("--out", pre_out, "Output parameter file")->required();

  ConfigArgs meta_args;
  std::string meta_out;
  std::string meta_learner;
  CLI::App* meta =
      app.add_subcommand("meta-train", "Meta-train the embedding on streamed episodes");
  add_config_options(*meta, meta_args);
  meta->add_option("--learner", meta_learner, "Learner whose objective to train for");
  meta->add_option("--out", meta_out, "Output parameter file")->required();

  ConfigArgs run_args;
  std::string run_out;
  std::string run_learner;
  std::string run_params;
  std::optional<int> run_threads;
  CLI::App* run = app.add_subcommand("run", "Stream episodes and write summary + predictions");
  add_config_options(*run, run_args);
  run->add_option("--learner", run_learner, "Learner name (overrides the config)");
  run->add_option("--params", run_params, "Embedding parameter file");
  run->add_option("--threads", run_threads, "Worker threads (0 = all cores)");
  run->add_option("--out", run_out, "Output directory")->required();

  std::vector<std::string> plot_inputs;
  std::string plot_out;
  CLI::App* plot = app.add_subcommand("plot", "Render SVG/CSV curves from run summaries");
  plot->add_option("summaries", plot_inputs, "summary.json files")->required();
  plot->add_option("--out", plot_out, "Output directory")->required();

  std::string cmp_a, cmp_b, cmp_metric, cmp_direction;
  double cmp_margin = 0.5;
  CLI::App* compare =
      app.add_subcommand("compare", "Test a directional gap between two run summaries");
  compare->add_option("summary_a", cmp_a, "First summary.json")->required();
  compare->add_option("summary_b", cmp_b, "Second summary.json")->required();
  compare->add_option("--metric", cmp_metric, "online_avg | f_avg | f_avg_paper_literal")
      ->required();
  compare->add_option("--direction", cmp_direction, "'<' or '>' (a relative to b)")->required();
  compare->add_option("--margin", cmp_margin, "Required gap in pooled standard deviations");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    ConfigPtr config = build_config(gen_args);
    check(db_cmd_gen(config.get(), gen_out.c_str()), "gen");
    std::printf("wrote episodes to %s\n", gen_out.c_str());
    return 0;
  }
  if (pretrain->parsed()) {
    ConfigPtr config = build_config(pre_args);
    check(db_cmd_pretrain(config.get(), pre_out.c_str()), "pretrain");
    std::printf("wrote %s\n", pre_out.c_str());
    return 0;
  }
  if (meta->parsed()) {
    if (!meta_learner.empty())
      meta_args.sets.push_back("learner.name=" + meta_learner);
    ConfigPtr config = build_config(meta_args);
    check(db_cmd_meta_train(config.get(), meta_out.c_str()), "meta-train");
    std::printf("wrote %s\n", meta_out.c_str());
    return 0;
  }
  if (run->parsed()) {
    ConfigPtr config = build_config(run_args);
    const int threads = run_threads ? *run_threads : threads_from_env();
    check(db_cmd_run(config.get(), run_learner.empty() ? nullptr : run_learner.c_str(),
                     run_params.empty() ? nullptr : run_params.c_str(), threads,
                     run_out.c_str()),
          "run");
    std::printf("wrote %s/summary.json\n", run_out.c_str());
    return 0;
  }
  if (plot->parsed()) {
    std::vector<const char*> paths;
    paths.reserve(plot_inputs.size());
    for (const std::string& p : plot_inputs) paths.push_back(p.c_str());
    check(db_cmd_plot(paths.data(), static_cast<int>(paths.size()), plot_out.c_str()), "plot");
    std::printf("wrote plots to %s\n", plot_out.c_str());
    return 0;
  }
  if (compare->parsed()) {
    int pass = 0;
    char verdict[512] = {0};
    check(db_cmd_compare(cmp_a.c_str(), cmp_b.c_str(), cmp_metric.c_str(),
                         cmp_direction.c_str(), cmp_margin, &pass, verdict, sizeof(verdict)),
          "compare");
    std::printf("%s\n", verdict);
    return pass ? 0 : 1;
  }
  return kExitError;
}
