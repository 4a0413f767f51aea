#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tirlab/rollout.hpp"
#include "tirlab/sampler.hpp"

namespace tirlab::env {

enum class Algorithm { kGrpo, kVspo };

struct TrainConfig {
  grpo::OptimConfig optim;
  Algorithm algorithm = Algorithm::kVspo;
  RewardKind reward = RewardKind::kPrs;
  vspo::Options sampler;
  std::uint64_t seed = 1;
  int steps = 120;
  int batch_size = 8;
  int eval_rollouts = 4;
  double init_boost = kDefaultInitBoost;
  RolloutParams rollout;
};

struct StepMetrics {
  int step = 0;
  double loss = 0.0;
  double kl = 0.0;
  double entropy = 0.0;
  double grad_norm = 0.0;
  double mean_reward = 0.0;
  double valid_group_fraction = 0.0;
  // sampler telemetry (identity values for plain runs)
  int dropped_count = 0;
  int kept_count = 0;
  int max_n = 1;
  double value_min = 0.0;
  double value_median = 0.0;
  double value_max = 0.0;
  bool fallback = false;
  // evaluation checkpoint after the update
  double eval_reward = 0.0;
  double eval_parse_success = 0.0;
  double eval_em = 0.0;

  nlohmann::json to_json() const;
};

struct TrainRun {
  TrainConfig config;
  std::vector<StepMetrics> history;
};

struct TrainResult {
  TrainRun run;
  grpo::ToyPolicy policy;
};

// Full loop: sample a batch of prompts, roll out a group per prompt, score,
// transform the batch (plain advantages for GRPO; filter/resample for the
// value sampler with a fallback to GRPO when everything is dropped), take a
// gradient step, evaluate. Every random draw comes from a stream derived
// from (seed, step, role), so reruns are bit-identical.
TrainResult train(const TrainConfig& cfg, const TaskSet& tasks);

std::string metrics_jsonl(const std::vector<StepMetrics>& history);

nlohmann::json policy_snapshot(const grpo::ToyPolicy& policy);

}  // namespace tirlab::env
