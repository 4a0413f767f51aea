#include "tirlab/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace tirlab::vspo {

std::pair<std::vector<grpo::RolloutGroup>, std::vector<grpo::RolloutGroup>>
filter_low_variance(const grpo::Batch& batch, double eps) {
  std::vector<grpo::RolloutGroup> kept, dropped;
  for (const grpo::RolloutGroup& g : batch.groups) {
    (g.var >= eps ? kept : dropped).push_back(g);
  }
  if (kept.empty()) throw AllDropped();
  return {std::move(kept), std::move(dropped)};
}

double value_score(const grpo::RolloutGroup& group, double r_max) {
  return (r_max - group.mean) * group.var;
}

std::vector<double> sampling_distribution(const std::vector<double>& values,
                                          double temperature) {
  if (values.empty())
    throw std::invalid_argument("sampling_distribution: empty values");
  if (temperature <= 0.0)
    throw std::invalid_argument("sampling_distribution: temperature must be > 0");
  for (double v : values) {
    if (!std::isfinite(v))
      throw std::invalid_argument("sampling_distribution: non-finite value");
  }
  double mx = values[0] / temperature;
  for (double v : values) mx = std::max(mx, v / temperature);
  std::vector<double> p(values.size());
  double z = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    p[i] = std::exp(values[i] / temperature - mx);
    z += p[i];
  }
  for (double& x : p) x /= z;
  return p;
}

std::map<std::string, int> resample(const std::vector<grpo::RolloutGroup>& kept,
                                    int slots,
                                    const std::vector<double>& probs,
                                    std::mt19937_64& rng) {
  if (kept.empty()) throw std::invalid_argument("resample: no kept groups");
  if (kept.size() != probs.size())
    throw std::invalid_argument("resample: probs size mismatch");
  if (slots < 0) throw std::invalid_argument("resample: negative slot count");
  std::map<std::string, int> mult;
  for (const grpo::RolloutGroup& g : kept) mult[g.prompt_id] = 1;
  for (int s = 0; s < slots; ++s) {
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t pick = probs.size() - 1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    ++mult[kept[pick].prompt_id];
  }
  return mult;
}

double smooth_clip_advantage(double advantage, int n, double alpha) {
  if (n < 1) throw std::invalid_argument("smooth_clip_advantage: n must be >= 1");
  return (alpha - (alpha - 1.0) / static_cast<double>(n)) * advantage;
}

grpo::Batch vspo_transform(const grpo::Batch& batch,
                           const grpo::OptimConfig& cfg, std::mt19937_64& rng,
                           const Options& options, Telemetry* telemetry) {
  if (batch.groups.empty())
    throw std::invalid_argument("vspo_transform: empty batch");
  for (const grpo::RolloutGroup& g : batch.groups) {
    if (g.rollouts.empty())
      throw std::invalid_argument("vspo_transform: group " + g.prompt_id +
                                  " has no rollouts");
  }

  // r_max over every rollout in the incoming batch, degenerate groups
  // included: their ceiling is real even if their spread is not.
  double r_max = batch.groups.front().rollouts.front().reward;
  for (const grpo::RolloutGroup& g : batch.groups) {
    for (const grpo::Rollout& r : g.rollouts) r_max = std::max(r_max, r.reward);
  }

  auto [kept, dropped] = filter_low_variance(batch, cfg.var_threshold);

  std::vector<double> values(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    values[i] = value_score(kept[i], r_max);

  std::vector<double> probs =
      options.sampling == Sampling::kValue
          ? sampling_distribution(values, cfg.temperature)
          : std::vector<double>(kept.size(), 1.0 / kept.size());

  grpo::Batch out;
  out.multiplicity =
      resample(kept, static_cast<int>(dropped.size()), probs, rng);

  for (grpo::RolloutGroup& g : kept) {
    const int n = out.multiplicity.at(g.prompt_id);
    g.advantages = grpo::grpo_advantages(g.rewards());
    if (options.smoothing_clip) {
      // per-slot share: the N weighted copies together contribute the
      // smoothed total (alpha - (alpha-1)/N) * A, bounded by alpha * A
      for (double& a : g.advantages)
        a = smooth_clip_advantage(a, n, cfg.alpha) / static_cast<double>(n);
    }
    out.groups.push_back(std::move(g));
  }

  if (telemetry) {
    telemetry->dropped_count = static_cast<int>(dropped.size());
    telemetry->kept_count = static_cast<int>(out.groups.size());
    telemetry->max_n = 1;
    for (const auto& [id, n] : out.multiplicity)
      telemetry->max_n = std::max(telemetry->max_n, n);
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    telemetry->value_min = sorted.front();
    telemetry->value_max = sorted.back();
    telemetry->value_median = sorted[sorted.size() / 2];
    telemetry->fallback = false;
  }
  return out;
}

}  // namespace tirlab::vspo
