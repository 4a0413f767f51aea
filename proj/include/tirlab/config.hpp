#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tirlab/train.hpp"

namespace tirlab::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error("config key '" + key + "': " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Flat key = value file, '#' comments. Unknown keys are errors: a typo that
// silently fell back to a default would invalidate whole comparison runs.
// Precedence: command-line overrides > TIRLAB_* environment variables >
// file > defaults.
struct RunConfig {
  std::string algorithm = "vspo";       // grpo | vspo
  std::string reward = "prs";           // binary | prs
  std::uint64_t seed = 1;
  int steps = 95;  // stock runs converge around step 50-60; the tail margin
                   // keeps the comparison insensitive to plateau jitter
  int batch_size = 8;
  int group_size = 5;
  double clip_epsilon = 0.2;
  double kl_beta = 0.001;
  double learning_rate = 40.0;  // toy-scale: the loss averages over batch,
                                // group and tokens (~1/360 per event), and
                                // logits move ~0.1 per step at this setting.
                                // The optimizer default is real-model scale.
  double temperature = 1.0;
  double alpha = 2.0;
  double var_threshold = 1e-6;
  std::string vspo_sampling = "value";  // value | random
  bool vspo_smoothing_clip = true;
  int eval_rollouts = 4;
  double init_boost = env::kDefaultInitBoost;
  std::string task_set;    // JSONL path; empty = generate the stock set
  std::string output_dir = "runs/out";
  std::string judge_mode = "mock";  // mock | http
  double judge_cutoff = 0.6;
  std::string judge_endpoint;
  int judge_timeout_ms = 5000;
  int judge_retries = 1;

  void apply(const std::string& key, const std::string& value);
  void validate() const;

  env::TrainConfig to_train_config() const;
  std::string serialize() const;  // canonical form; load(serialize()) == *this
  std::string hash() const;       // of the canonical form
};

RunConfig load_config(const std::string& path);

// env overrides then key=value overrides, on top of cfg
void apply_env(RunConfig& cfg);
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides);

const std::vector<std::string>& known_keys();

}  // namespace tirlab::cli
