#include "core/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "core/rng.hpp"

namespace driftbench {

namespace {

enum class FieldKind { Int, Real, Bool, Str };

struct FieldDef {
  FieldKind kind;
  std::function<void(DriftConfig&, int64_t)> set_int;
  std::function<void(DriftConfig&, double)> set_real;
  std::function<void(DriftConfig&, bool)> set_bool;
  std::function<void(DriftConfig&, const std::string&)> set_str;
};

std::map<std::string, FieldDef> build_registry() {
  std::map<std::string, FieldDef> reg;
  auto add_int = [&](const std::string& name, auto member) {
    FieldDef d;
    d.kind = FieldKind::Int;
    d.set_int = [member](DriftConfig& c, int64_t v) { std::invoke(member, c) = v; };
    reg[name] = std::move(d);
  };
  auto add_real = [&](const std::string& name, auto member) {
    FieldDef d;
    d.kind = FieldKind::Real;
    d.set_real = [member](DriftConfig& c, double v) { std::invoke(member, c) = v; };
    reg[name] = std::move(d);
  };
  auto add_bool = [&](const std::string& name, auto member) {
    FieldDef d;
    d.kind = FieldKind::Bool;
    d.set_bool = [member](DriftConfig& c, bool v) { std::invoke(member, c) = v; };
    reg[name] = std::move(d);
  };
  auto add_str = [&](const std::string& name, auto member) {
    FieldDef d;
    d.kind = FieldKind::Str;
    d.set_str = [member](DriftConfig& c, const std::string& v) { std::invoke(member, c) = v; };
    reg[name] = std::move(d);
  };

  add_int("world.dim", [](DriftConfig& c) -> auto& { return c.world.dim; });
  add_int("world.pool_size", [](DriftConfig& c) -> auto& { return c.world.pool_size; });
  add_int("world.classes_per_env",
          [](DriftConfig& c) -> auto& { return c.world.classes_per_env; });
  add_real("world.persist_prob", [](DriftConfig& c) -> auto& { return c.world.persist_prob; });
  add_int("world.frames_per_env",
          [](DriftConfig& c) -> auto& { return c.world.frames_per_env; });
  add_int("world.envs_per_episode",
          [](DriftConfig& c) -> auto& { return c.world.envs_per_episode; });
  add_real("world.label_fraction",
           [](DriftConfig& c) -> auto& { return c.world.label_fraction; });
  add_real("world.noise_sigma", [](DriftConfig& c) -> auto& { return c.world.noise_sigma; });
  add_real("world.context_sigma", [](DriftConfig& c) -> auto& { return c.world.context_sigma; });
  add_real("world.instance_sigma",
           [](DriftConfig& c) -> auto& { return c.world.instance_sigma; });
  add_int("world.seed", [](DriftConfig& c) -> auto& { return c.world.seed; });

  add_str("learner.name", [](DriftConfig& c) -> auto& { return c.learner.name; });
  add_real("learner.learning_rate",
           [](DriftConfig& c) -> auto& { return c.learner.learning_rate; });
  add_real("learner.lambda", [](DriftConfig& c) -> auto& { return c.learner.lambda; });
  add_real("learner.lambda_d", [](DriftConfig& c) -> auto& { return c.learner.lambda_d; });
  add_real("learner.tau", [](DriftConfig& c) -> auto& { return c.learner.tau; });
  add_real("learner.alpha_min", [](DriftConfig& c) -> auto& { return c.learner.alpha_min; });
  add_real("learner.decay", [](DriftConfig& c) -> auto& { return c.learner.decay; });
  add_str("learner.gate_mode", [](DriftConfig& c) -> auto& { return c.learner.gate_mode; });
  add_bool("learner.stop_grad_prototypes",
           [](DriftConfig& c) -> auto& { return c.learner.stop_grad_prototypes; });
  add_str("learner.forgetting_denominator",
          [](DriftConfig& c) -> auto& { return c.learner.forgetting_denominator; });
  add_bool("learner.forgetting_labeled_only",
           [](DriftConfig& c) -> auto& { return c.learner.forgetting_labeled_only; });
  add_bool("learner.seen_includes_unlabeled",
           [](DriftConfig& c) -> auto& { return c.learner.seen_includes_unlabeled; });

  add_int("embedding.embed_dim", [](DriftConfig& c) -> auto& { return c.embedding.embed_dim; });
  add_int("embedding.hidden_dim",
          [](DriftConfig& c) -> auto& { return c.embedding.hidden_dim; });
  add_bool("embedding.use_bias", [](DriftConfig& c) -> auto& { return c.embedding.use_bias; });

  add_int("train.pretrain_episodes",
          [](DriftConfig& c) -> auto& { return c.train.pretrain_episodes; });
  add_int("train.pretrain_epochs",
          [](DriftConfig& c) -> auto& { return c.train.pretrain_epochs; });
  add_real("train.pretrain_lr", [](DriftConfig& c) -> auto& { return c.train.pretrain_lr; });
  add_int("train.meta_budget", [](DriftConfig& c) -> auto& { return c.train.meta_budget; });
  add_real("train.meta_lr", [](DriftConfig& c) -> auto& { return c.train.meta_lr; });

  add_int("run.episodes", [](DriftConfig& c) -> auto& { return c.run.episodes; });
  add_str("run.split", [](DriftConfig& c) -> auto& { return c.run.split; });
  add_int("run.threads", [](DriftConfig& c) -> auto& { return c.run.threads; });
  add_str("run.output_dir", [](DriftConfig& c) -> auto& { return c.run.output_dir; });
  return reg;
}

const std::map<std::string, FieldDef>& registry() {
  static const std::map<std::string, FieldDef> reg = build_registry();
  return reg;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strips a trailing comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

int64_t parse_int(const std::string& text, const std::string& where) {
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(errc::config, where + ": expected integer, got '" + text + "'");
  return value;
}

double parse_real(const std::string& text, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(errc::config, where + ": expected number, got '" + text + "'");
  return value;
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true") return true;
  if (text == "false") return false;
  fail(errc::config, where + ": expected true or false, got '" + text + "'");
}

// value from a config file: strings must be quoted. `loose_strings` relaxes
// that for command-line --set overrides.
void apply_value(DriftConfig& config, const std::string& full_key, const std::string& raw,
                 bool loose_strings, const std::string& where) {
  auto it = registry().find(full_key);
  if (it == registry().end()) fail(errc::config, where + ": unknown key '" + full_key + "'");
  const FieldDef& def = it->second;
  switch (def.kind) {
    case FieldKind::Int:
      def.set_int(config, parse_int(raw, where));
      break;
    case FieldKind::Real:
      def.set_real(config, parse_real(raw, where));
      break;
    case FieldKind::Bool:
      def.set_bool(config, parse_bool(raw, where));
      break;
    case FieldKind::Str: {
      std::string value = raw;
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
        value = value.substr(1, value.size() - 2);
        if (value.find('"') != std::string::npos)
          fail(errc::config, where + ": embedded quotes are not supported");
      } else if (!loose_strings) {
        fail(errc::config, where + ": string values must be double-quoted");
      }
      def.set_str(config, value);
      break;
    }
  }
}

}  // namespace

DriftConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open config file: " + path);
  DriftConfig config;
  std::set<std::string> assigned;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path + ":" + std::to_string(lineno);
    std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail(errc::config, where + ": malformed section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section.empty()) fail(errc::config, where + ": empty section name");
      continue;
    }
    std::size_t eq = body.find('=');
    if (eq == std::string::npos) fail(errc::config, where + ": expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) fail(errc::config, where + ": expected key = value");
    if (section.empty()) fail(errc::config, where + ": key outside any [section]");
    const std::string full_key = section + "." + key;
    if (!assigned.insert(full_key).second)
      fail(errc::config, where + ": duplicate key '" + full_key + "'");
    apply_value(config, full_key, value, /*loose_strings=*/false, where);
  }
  return config;
}

void apply_set(DriftConfig& config, const std::string& spec) {
  std::size_t eq = spec.find('=');
  if (eq == std::string::npos)
    fail(errc::config, "--set expects section.key=value, got '" + spec + "'");
  std::string key = trim(spec.substr(0, eq));
  std::string value = trim(spec.substr(eq + 1));
  if (key.find('.') == std::string::npos)
    fail(errc::config, "--set expects section.key=value, got '" + spec + "'");
  apply_value(config, key, value, /*loose_strings=*/true, "--set " + key);
}

std::string canonical_learner_name(const std::string& name) {
  std::string canon = name;
  std::replace(canon.begin(), canon.end(), '_', '-');
  static const std::set<std::string> known = {"base",      "lwf",        "oap",
                                              "cpm-lite",  "proto-oml",  "upper-bound"};
  if (!known.count(canon)) {
    std::ostringstream msg;
    msg << "unknown learner '" << name << "'; available:";
    for (const std::string& k : known) msg << " " << k;
    fail(errc::config, msg.str());
  }
  return canon;
}

void validate_config(const DriftConfig& config) {
  const WorldConfig& w = config.world;
  if (w.dim <= 0) fail(errc::config, "world.dim must be positive");
  if (w.pool_size <= 0) fail(errc::config, "world.pool_size must be positive");
  if (w.classes_per_env <= 0) fail(errc::config, "world.classes_per_env must be positive");
  if (w.classes_per_env > w.pool_size)
    fail(errc::config, "world.classes_per_env exceeds world.pool_size");
  if (w.persist_prob < 0.0 || w.persist_prob > 1.0)
    fail(errc::config, "world.persist_prob must be in [0,1]");
  if (w.frames_per_env <= 0) fail(errc::config, "world.frames_per_env must be positive");
  if (w.envs_per_episode <= 0) fail(errc::config, "world.envs_per_episode must be positive");
  if (w.label_fraction < 0.0 || w.label_fraction > 1.0)
    fail(errc::config, "world.label_fraction must be in [0,1]");
  if (w.noise_sigma < 0.0 || w.context_sigma < 0.0 || w.instance_sigma < 0.0)
    fail(errc::config, "world sigmas must be non-negative");

  const LearnerConfig& l = config.learner;
  canonical_learner_name(l.name);
  if (l.learning_rate <= 0.0) fail(errc::config, "learner.learning_rate must be positive");
  if (l.lambda < 0.0) fail(errc::config, "learner.lambda must be non-negative");
  if (l.lambda_d < 0.0) fail(errc::config, "learner.lambda_d must be non-negative");
  if (l.tau <= 0.0) fail(errc::config, "learner.tau must be positive");
  if (l.alpha_min <= 0.0 || l.alpha_min > 1.0)
    fail(errc::config, "learner.alpha_min must be in (0,1]");
  if (l.decay < 0.0) fail(errc::config, "learner.decay must be non-negative");
  if (l.gate_mode != "recency" && l.gate_mode != "count")
    fail(errc::config, "learner.gate_mode must be recency or count");
  if (l.forgetting_denominator != "default" && l.forgetting_denominator != "paper-literal")
    fail(errc::config, "learner.forgetting_denominator must be default or paper-literal");

  const EmbeddingConfig& e = config.embedding;
  if (e.embed_dim <= 0) fail(errc::config, "embedding.embed_dim must be positive");
  if (e.hidden_dim < 0) fail(errc::config, "embedding.hidden_dim must be non-negative");

  const TrainConfig& t = config.train;
  if (t.pretrain_episodes <= 0) fail(errc::config, "train.pretrain_episodes must be positive");
  if (t.pretrain_epochs <= 0) fail(errc::config, "train.pretrain_epochs must be positive");
  if (t.pretrain_lr <= 0.0) fail(errc::config, "train.pretrain_lr must be positive");
  if (t.meta_budget <= 0) fail(errc::config, "train.meta_budget must be positive");
  if (t.meta_lr <= 0.0) fail(errc::config, "train.meta_lr must be positive");

  const RunSection& r = config.run;
  if (r.episodes <= 0) fail(errc::config, "run.episodes must be positive");
  if (static_cast<uint64_t>(r.episodes) > kSplitTrainBase)
    fail(errc::config, "run.episodes would overlap the next split's seed range");
  if (r.split != "train" && r.split != "val" && r.split != "test")
    fail(errc::config, "run.split must be train, val, or test");
  if (r.threads < 0) fail(errc::config, "run.threads must be non-negative");
}

uint64_t episode_seed(const DriftConfig& config, const std::string& split, uint64_t index) {
  uint64_t base = 0;
  if (split == "test") {
    base = kSplitTestBase;
  } else if (split == "train") {
    base = kSplitTrainBase;
  } else if (split == "val") {
    base = kSplitValBase;
  } else {
    fail(errc::config, "unknown split '" + split + "'");
  }
  if (index >= kSplitTrainBase)
    fail(errc::config, "episode index " + std::to_string(index) + " overflows its split range");
  return derive_seed(config.world.seed, base + index);
}

}  // namespace driftbench
