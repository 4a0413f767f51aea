#include "tirlab/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "tirlab/common.hpp"

namespace tirlab::cli {

namespace {

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const auto x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected unsigned integer, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected integer, got '" + v + "'");
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void RunConfig::apply(const std::string& key, const std::string& value) {
  if (key == "algorithm") algorithm = value;
  else if (key == "reward") reward = value;
  else if (key == "seed") seed = parse_u64(key, value);
  else if (key == "steps") steps = parse_int(key, value);
  else if (key == "batch_size") batch_size = parse_int(key, value);
  else if (key == "group_size") group_size = parse_int(key, value);
  else if (key == "clip_epsilon") clip_epsilon = parse_double(key, value);
  else if (key == "kl_beta") kl_beta = parse_double(key, value);
  else if (key == "learning_rate") learning_rate = parse_double(key, value);
  else if (key == "temperature") temperature = parse_double(key, value);
  else if (key == "alpha") alpha = parse_double(key, value);
  else if (key == "var_threshold") var_threshold = parse_double(key, value);
  else if (key == "vspo_sampling") vspo_sampling = value;
  else if (key == "vspo_smoothing_clip") vspo_smoothing_clip = parse_bool(key, value);
  else if (key == "eval_rollouts") eval_rollouts = parse_int(key, value);
  else if (key == "init_boost") init_boost = parse_double(key, value);
  else if (key == "task_set") task_set = value;
  else if (key == "output_dir") output_dir = value;
  else if (key == "judge_mode") judge_mode = value;
  else if (key == "judge_cutoff") judge_cutoff = parse_double(key, value);
  else if (key == "judge_endpoint") judge_endpoint = value;
  else if (key == "judge_timeout_ms") judge_timeout_ms = parse_int(key, value);
  else if (key == "judge_retries") judge_retries = parse_int(key, value);
  else throw ConfigError(key, "unknown key");
}

void RunConfig::validate() const {
  if (algorithm != "grpo" && algorithm != "vspo")
    throw ConfigError("algorithm", "must be grpo or vspo, got '" + algorithm + "'");
  if (reward != "binary" && reward != "prs")
    throw ConfigError("reward", "must be binary or prs, got '" + reward + "'");
  if (vspo_sampling != "value" && vspo_sampling != "random")
    throw ConfigError("vspo_sampling",
                      "must be value or random, got '" + vspo_sampling + "'");
  if (judge_mode != "mock" && judge_mode != "http")
    throw ConfigError("judge_mode", "must be mock or http, got '" + judge_mode + "'");
  if (steps < 0) throw ConfigError("steps", "must be >= 0");
  if (batch_size < 1) throw ConfigError("batch_size", "must be >= 1");
  if (eval_rollouts < 1) throw ConfigError("eval_rollouts", "must be >= 1");
  if (judge_timeout_ms < 1) throw ConfigError("judge_timeout_ms", "must be >= 1");
  if (judge_retries < 0) throw ConfigError("judge_retries", "must be >= 0");
  try {
    to_train_config().optim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("optim", e.what());
  }
}

env::TrainConfig RunConfig::to_train_config() const {
  env::TrainConfig t;
  t.optim.clip_epsilon = clip_epsilon;
  t.optim.kl_beta = kl_beta;
  t.optim.group_size = group_size;
  t.optim.learning_rate = learning_rate;
  t.optim.temperature = temperature;
  t.optim.alpha = alpha;
  t.optim.var_threshold = var_threshold;
  t.algorithm = algorithm == "grpo" ? env::Algorithm::kGrpo : env::Algorithm::kVspo;
  t.reward = reward == "binary" ? env::RewardKind::kBinary : env::RewardKind::kPrs;
  t.sampler.sampling = vspo_sampling == "random" ? vspo::Sampling::kRandom
                                                 : vspo::Sampling::kValue;
  t.sampler.smoothing_clip = vspo_smoothing_clip;
  t.seed = seed;
  t.steps = steps;
  t.batch_size = batch_size;
  t.eval_rollouts = eval_rollouts;
  t.init_boost = init_boost;
  return t;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "algorithm",      "reward",        "seed",
      "steps",          "batch_size",    "group_size",
      "clip_epsilon",   "kl_beta",       "learning_rate",
      "temperature",    "alpha",         "var_threshold",
      "vspo_sampling",  "vspo_smoothing_clip", "eval_rollouts",
      "init_boost",     "task_set",      "output_dir",
      "judge_mode",     "judge_cutoff",  "judge_endpoint",
      "judge_timeout_ms", "judge_retries"};
  return keys;
}

std::string RunConfig::serialize() const {
  std::map<std::string, std::string> kv = {
      {"algorithm", algorithm},
      {"reward", reward},
      {"seed", std::to_string(seed)},
      {"steps", std::to_string(steps)},
      {"batch_size", std::to_string(batch_size)},
      {"group_size", std::to_string(group_size)},
      {"clip_epsilon", fmt(clip_epsilon)},
      {"kl_beta", fmt(kl_beta)},
      {"learning_rate", fmt(learning_rate)},
      {"temperature", fmt(temperature)},
      {"alpha", fmt(alpha)},
      {"var_threshold", fmt(var_threshold)},
      {"vspo_sampling", vspo_sampling},
      {"vspo_smoothing_clip", vspo_smoothing_clip ? "true" : "false"},
      {"eval_rollouts", std::to_string(eval_rollouts)},
      {"init_boost", fmt(init_boost)},
      {"task_set", task_set},
      {"output_dir", output_dir},
      {"judge_mode", judge_mode},
      {"judge_cutoff", fmt(judge_cutoff)},
      {"judge_endpoint", judge_endpoint},
      {"judge_timeout_ms", std::to_string(judge_timeout_ms)},
      {"judge_retries", std::to_string(judge_retries)}};
  std::string out;
  for (const std::string& key : known_keys()) {
    out += key;
    out += " = ";
    out += kv.at(key);
    out += '\n';
  }
  return out;
}

std::string RunConfig::hash() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(serialize())));
  return buf;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  RunConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_at = line.find('#');
    if (hash_at != std::string::npos) line = line.substr(0, hash_at);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", "line " + std::to_string(lineno) +
                                      ": expected key = value");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    cfg.apply(key, value);
  }
  return cfg;
}

void apply_env(RunConfig& cfg) {
  for (const std::string& key : known_keys()) {
    std::string env_name = "TIRLAB_";
    for (char c : key)
      env_name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(env_name.c_str())) cfg.apply(key, v);
  }
}

void apply_overrides(RunConfig& cfg,
                     const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ConfigError(ov, "override must look like key=value");
    cfg.apply(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
  }
}

}  // namespace tirlab::cli
