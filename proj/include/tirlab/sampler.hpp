#pragma once

#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tirlab/grpo.hpp"

// Value-based batch resampling. Zero-variance rollout groups contribute no
// gradient, so they are dropped and their batch slots refilled by sampling
// the informative groups in proportion to a value score. A smoothing clip
// keeps the refill from blowing up the effective advantage of any one
// prompt.

namespace tirlab::vspo {

class AllDropped : public std::runtime_error {
 public:
  AllDropped() : std::runtime_error("every group fell below the variance threshold") {}
};

enum class Sampling { kValue, kRandom };

struct Options {
  Sampling sampling = Sampling::kValue;
  bool smoothing_clip = true;  // ablation switch; leave on for real runs
};

struct Telemetry {
  int dropped_count = 0;
  int kept_count = 0;
  int max_n = 1;
  double value_min = 0.0;
  double value_median = 0.0;
  double value_max = 0.0;
  bool fallback = false;  // set by callers that caught AllDropped
};

// Splits groups into (kept, dropped) by reward variance. Throws AllDropped
// when nothing survives; callers fall back to the plain unfiltered batch.
std::pair<std::vector<grpo::RolloutGroup>, std::vector<grpo::RolloutGroup>>
filter_low_variance(const grpo::Batch& batch, double eps);

// (r_max - mean) * var; r_max comes from the whole pre-filter batch
double value_score(const grpo::RolloutGroup& group, double r_max);

// softmax(values / temperature), max-subtracted. Throws on empty input,
// non-finite values, or temperature <= 0.
std::vector<double> sampling_distribution(const std::vector<double>& values,
                                          double temperature);

// Draws `slots` replacements with replacement; multiplicity is 1 + times
// drawn. Deterministic given the generator state.
std::map<std::string, int> resample(const std::vector<grpo::RolloutGroup>& kept,
                                    int slots,
                                    const std::vector<double>& probs,
                                    std::mt19937_64& rng);

// (alpha - (alpha - 1) / n) * a. Throws for n < 1.
double smooth_clip_advantage(double advantage, int n, double alpha);

// Full pipeline: filter -> value -> softmax -> resample -> advantages.
// Output groups carry grpo_advantages; with smoothing on, each is scaled by
// smooth_clip_advantage(., N, alpha) / N so that the N multiplicity-weighted
// copies sum to the smoothed total rather than N times it. With smoothing
// off the raw advantages ride along and the batch weight alone scales the
// group by N (the instability the clip exists to prevent).
grpo::Batch vspo_transform(const grpo::Batch& batch,
                           const grpo::OptimConfig& cfg, std::mt19937_64& rng,
                           const Options& options = {},
                           Telemetry* telemetry = nullptr);

}  // namespace tirlab::vspo
