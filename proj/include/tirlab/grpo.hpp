#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tirlab/policy.hpp"
#include "tirlab/trajectory.hpp"

// Group-relative policy optimization on the toy policy: advantages are
// reward z-scores within a rollout group, the surrogate is the familiar
// clipped ratio objective, and a KL penalty against a frozen reference is
// added at the batch level.

namespace tirlab::grpo {

struct OptimConfig {
  double clip_epsilon = 0.2;
  double kl_beta = 0.001;
  int group_size = 5;
  double learning_rate = 1e-6;
  double temperature = 1.0;   // value-sampling softmax temperature
  double alpha = 2.0;         // smoothing-clip ceiling
  double var_threshold = 1e-6;

  void validate() const;
};

struct TokenEvent {
  int context = 0;
  int action = 0;
  double logprob_old = 0.0;  // under the policy that sampled the rollout
};

struct Rollout {
  traj::Trajectory trajectory;
  std::vector<TokenEvent> tokens;
  double reward = 0.0;
};

struct RolloutGroup {
  std::string prompt_id;
  std::vector<Rollout> rollouts;
  double mean = 0.0;
  double var = 0.0;  // population variance
  std::vector<double> advantages;  // one per rollout, filled by the optimizer

  std::vector<double> rewards() const;
  void recompute_stats();
};

struct Batch {
  std::vector<RolloutGroup> groups;  // one entry per unique prompt
  std::map<std::string, int> multiplicity;  // prompt_id -> copies in the batch

  int multiplicity_of(const std::string& prompt_id) const;
};

// population mean/variance; throws std::invalid_argument for fewer than 2
std::pair<double, double> group_stats(const std::vector<double>& rewards);

// (r - mean) / std, all zeros for a zero-variance group
std::vector<double> grpo_advantages(const std::vector<double>& rewards);

// min(ratio * a, clip(ratio, 1-eps, 1+eps) * a)
double clipped_surrogate(double ratio, double advantage, double clip_epsilon);

struct LossMetrics {
  double mean_kl = 0.0;
  double mean_entropy = 0.0;
  double grad_norm = 0.0;
};

struct BatchLossResult {
  double loss = 0.0;
  std::vector<double> grad;  // d loss / d logits, same layout as the policy
  LossMetrics metrics;
};

// loss = -(1/|B|) sum_groups N_g * (1/G) sum_i (1/|y_i|) sum_t surrogate
//        + beta * KL(policy || ref), token-averaged with the same weights.
// |B| counts unique groups; a group's multiplicity N_g scales its term, so a
// batch holding one group N times has exactly N times the single-copy
// surrogate gradient. Throws if any group is missing advantages.
BatchLossResult batch_loss(const Batch& batch, const ToyPolicy& policy,
                           const ToyPolicy& ref, const OptimConfig& cfg);

}  // namespace tirlab::grpo
