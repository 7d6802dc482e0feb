#include "core/summary.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace driftbench {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json opt_list(const std::vector<std::optional<double>>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(opt(v));
  return arr;
}

json config_echo(const DriftConfig& c) {
  json world = {{"dim", c.world.dim},
                {"pool_size", c.world.pool_size},
                {"classes_per_env", c.world.classes_per_env},
                {"persist_prob", c.world.persist_prob},
                {"frames_per_env", c.world.frames_per_env},
                {"envs_per_episode", c.world.envs_per_episode},
                {"label_fraction", c.world.label_fraction},
                {"noise_sigma", c.world.noise_sigma},
                {"context_sigma", c.world.context_sigma},
                {"instance_sigma", c.world.instance_sigma},
                {"seed", c.world.seed}};
  json learner = {{"name", c.learner.name},
                  {"learning_rate", c.learner.learning_rate},
                  {"lambda", c.learner.lambda},
                  {"lambda_d", c.learner.lambda_d},
                  {"tau", c.learner.tau},
                  {"alpha_min", c.learner.alpha_min},
                  {"decay", c.learner.decay},
                  {"gate_mode", c.learner.gate_mode},
                  {"stop_grad_prototypes", c.learner.stop_grad_prototypes},
                  {"forgetting_denominator", c.learner.forgetting_denominator},
                  {"forgetting_labeled_only", c.learner.forgetting_labeled_only},
                  {"seen_includes_unlabeled", c.learner.seen_includes_unlabeled}};
  json embedding = {{"embed_dim", c.embedding.embed_dim},
                    {"hidden_dim", c.embedding.hidden_dim},
                    {"use_bias", c.embedding.use_bias}};
  json train = {{"pretrain_episodes", c.train.pretrain_episodes},
                {"pretrain_epochs", c.train.pretrain_epochs},
                {"pretrain_lr", c.train.pretrain_lr},
                {"meta_budget", c.train.meta_budget},
                {"meta_lr", c.train.meta_lr}};
  json run = {{"episodes", c.run.episodes}, {"split", c.run.split}};
  return json{{"world", world},
              {"learner", learner},
              {"embedding", embedding},
              {"train", train},
              {"run", run}};
}

}  // namespace

json build_summary(const DriftConfig& config, const std::string& learner_name,
                   const std::vector<EpisodeMetrics>& episodes, const Aggregate& agg,
                   const std::string& created_at) {
  const bool is_upper_bound = learner_name == "upper-bound";

  json per_episode = json::array();
  for (const EpisodeMetrics& e : episodes) {
    per_episode.push_back(json{{"online_per_env", opt_list(e.online)},
                               {"online_avg", opt(e.online_avg)},
                               {"ff_per_env", opt_list(e.ff)},
                               {"f_avg", opt(e.f_avg)},
                               {"f_avg_paper_literal", opt(e.f_avg_paper_literal)}});
  }

  json aggregate = {{"online_avg_mean", opt(agg.online_avg_mean)},
                    {"online_avg_std", opt(agg.online_avg_std)},
                    {"online_per_env_mean", opt_list(agg.online_per_env_mean)},
                    {"ff_per_env_mean", opt_list(agg.ff_per_env_mean)}};
  if (!is_upper_bound) {
    aggregate["f_avg_mean"] = opt(agg.f_avg_mean);
    aggregate["f_avg_std"] = opt(agg.f_avg_std);
    aggregate["f_avg_paper_literal_mean"] = opt(agg.f_avg_paper_literal_mean);
    aggregate["f_avg_paper_literal_std"] = opt(agg.f_avg_paper_literal_std);
  }

  json summary = {{"format", "driftbench-summary-v1"},
                  {"created_at", created_at},
                  {"learner", learner_name},
                  {"seed", config.world.seed},
                  {"split", config.run.split},
                  {"episodes", agg.episodes},
                  {"config", config_echo(config)},
                  {"per_episode", per_episode},
                  {"aggregate", aggregate}};
  summary["digest"] = summary_digest(summary);
  return summary;
}

std::string summary_digest(const json& summary) {
  json stripped = summary;
  stripped.erase("created_at");
  if (stripped.contains("digest")) stripped.erase("digest");
  const uint64_t h = fnv1a64(stripped.dump());
  std::ostringstream out;
  out << std::hex << std::setfill('0') << std::setw(16) << h;
  return out.str();
}

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void write_json_file(const json& value, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot open for writing: " + path);
  out << value.dump(2) << "\n";
  if (!out) fail(errc::io, "write failed: " + path);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io, "cannot open: " + path);
  json value = json::parse(in, nullptr, false);
  if (value.is_discarded()) fail(errc::parse, path + ": invalid JSON");
  return value;
}

namespace {

bool type_matches(const json& instance, const std::string& type) {
  if (type == "object") return instance.is_object();
  if (type == "array") return instance.is_array();
  if (type == "string") return instance.is_string();
  if (type == "number") return instance.is_number();
  if (type == "integer") return instance.is_number_integer();
  if (type == "boolean") return instance.is_boolean();
  if (type == "null") return instance.is_null();
  fail(errc::parse, "schema: unsupported type '" + type + "'");
}

void validate_node(const json& instance, const json& schema, const std::string& path) {
  if (!schema.is_object()) fail(errc::parse, "schema node at " + path + " must be an object");

  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(instance, t.get<std::string>());
    } else if (t.is_array()) {
      for (const json& alt : t)
        if (type_matches(instance, alt.get<std::string>())) ok = true;
    }
    if (!ok) fail(errc::parse, path + ": type mismatch, expected " + t.dump());
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const json& allowed : schema["enum"])
      if (instance == allowed) ok = true;
    if (!ok) fail(errc::parse, path + ": value not in enum " + schema["enum"].dump());
  }
  if (instance.is_object()) {
    if (schema.contains("required")) {
      for (const json& key : schema["required"])
        if (!instance.contains(key.get<std::string>()))
          fail(errc::parse, path + ": missing required key '" + key.get<std::string>() + "'");
    }
    const json props = schema.value("properties", json::object());
    if (schema.value("additionalProperties", true) == false) {
      for (const auto& [key, value] : instance.items())
        if (!props.contains(key))
          fail(errc::parse, path + ": unexpected key '" + key + "'");
    }
    for (const auto& [key, sub] : props.items())
      if (instance.contains(key)) validate_node(instance[key], sub, path + "/" + key);
  }
  if (instance.is_array() && schema.contains("items")) {
    std::size_t i = 0;
    for (const json& item : instance) {
      validate_node(item, schema["items"], path + "/" + std::to_string(i));
      ++i;
    }
  }
}

}  // namespace

void validate_against_schema(const json& instance, const json& schema) {
  validate_node(instance, schema, "");
}

}  // namespace driftbench
