#include "tirlab/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tirlab::grpo {

void OptimConfig::validate() const {
  if (clip_epsilon <= 0.0 || clip_epsilon >= 1.0)
    throw std::invalid_argument("clip_epsilon must be in (0, 1)");
  if (kl_beta < 0.0) throw std::invalid_argument("kl_beta must be >= 0");
  if (group_size < 2) throw std::invalid_argument("group_size must be >= 2");
  if (learning_rate <= 0.0)
    throw std::invalid_argument("learning_rate must be > 0");
  if (temperature <= 0.0)
    throw std::invalid_argument("temperature must be > 0");
  if (alpha < 1.0) throw std::invalid_argument("alpha must be >= 1");
  if (var_threshold < 0.0)
    throw std::invalid_argument("var_threshold must be >= 0");
}

std::vector<double> RolloutGroup::rewards() const {
  std::vector<double> out;
  out.reserve(rollouts.size());
  for (const Rollout& r : rollouts) out.push_back(r.reward);
  return out;
}

void RolloutGroup::recompute_stats() {
  const auto [m, v] = group_stats(rewards());
  mean = m;
  var = v;
}

int Batch::multiplicity_of(const std::string& prompt_id) const {
  const auto it = multiplicity.find(prompt_id);
  return it == multiplicity.end() ? 1 : it->second;
}

std::pair<double, double> group_stats(const std::vector<double>& rewards) {
  if (rewards.size() < 2)
    throw std::invalid_argument("group_stats: need at least 2 rewards");
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());  // population, no Bessel
  return {mean, var};
}

std::vector<double> grpo_advantages(const std::vector<double>& rewards) {
  const auto [mean, var] = group_stats(rewards);
  std::vector<double> adv(rewards.size(), 0.0);
  // Identical rewards carry no signal. Compare the raw values, not the
  // variance: a constant group can round to a denormal-sized variance and
  // the normalization would blow that noise up to +-1.
  const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
  if (var <= 0.0 || *lo == *hi) return adv;
  const double sd = std::sqrt(var);
  for (std::size_t i = 0; i < rewards.size(); ++i)
    adv[i] = (rewards[i] - mean) / sd;
  return adv;
}

double clipped_surrogate(double ratio, double advantage, double clip_epsilon) {
  const double clipped =
      std::min(std::max(ratio, 1.0 - clip_epsilon), 1.0 + clip_epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

BatchLossResult batch_loss(const Batch& batch, const ToyPolicy& policy,
                           const ToyPolicy& ref, const OptimConfig& cfg) {
  cfg.validate();
  if (batch.groups.empty())
    throw std::invalid_argument("batch_loss: empty batch");
  for (const RolloutGroup& g : batch.groups) {
    if (g.advantages.size() != g.rollouts.size())
      throw std::invalid_argument("batch_loss: group " + g.prompt_id +
                                  " lacks advantages");
  }

  const int vocab = policy.vocab_size();
  BatchLossResult out;
  out.grad.assign(policy.params().size(), 0.0);

  const double inv_b = 1.0 / static_cast<double>(batch.groups.size());
  double surrogate = 0.0, kl_total = 0.0, ent_total = 0.0;

  // Per-group buffer, accumulated then scaled once by N_g/|B|. That keeps
  // "multiplicity N" and "N identical copies" bit-identical.
  std::vector<double> ggrad;

  for (const RolloutGroup& g : batch.groups) {
    const double n_g = static_cast<double>(batch.multiplicity_of(g.prompt_id));
    const double inv_grp = 1.0 / static_cast<double>(g.rollouts.size());
    ggrad.assign(out.grad.size(), 0.0);
    double gsurr = 0.0, gkl = 0.0, gent = 0.0;

    for (std::size_t i = 0; i < g.rollouts.size(); ++i) {
      const Rollout& r = g.rollouts[i];
      if (r.tokens.empty()) continue;
      const double a = g.advantages[i];
      const double inv_len = 1.0 / static_cast<double>(r.tokens.size());

      for (const TokenEvent& t : r.tokens) {
        const double lp = policy.log_prob(t.context, t.action);
        const double w = std::exp(lp - t.logprob_old);
        const double unclipped = w * a;
        const double clipped =
            std::min(std::max(w, 1.0 - cfg.clip_epsilon),
                     1.0 + cfg.clip_epsilon) *
            a;
        const double chosen = std::min(unclipped, clipped);
        gsurr += inv_grp * inv_len * chosen;

        const double kl = ToyPolicy::kl_divergence(policy, ref, t.context);
        gkl += inv_grp * inv_len * kl;
        gent += inv_grp * inv_len * policy.entropy(t.context);

        const std::vector<double> p = policy.probs(t.context);
        // surrogate derivative: active unless the clipped branch saturated
        const double surr_coef =
            unclipped <= clipped ? w * a : 0.0;
        for (int v = 0; v < vocab; ++v) {
          const std::size_t j = policy.index(t.context, v);
          const double dlogp = (v == t.action ? 1.0 : 0.0) - p[v];
          double dg = -surr_coef * dlogp;  // minus: loss is negated objective
          // d KL(p||q) / d logit_v = p_v * (log p_v - log q_v - KL); the
          // p_v -> 0 limit is 0, guarded so underflowed rows stay finite
          if (cfg.kl_beta != 0.0 && p[v] > 0.0) {
            const double dkl =
                p[v] * (std::log(p[v]) - ref.log_prob(t.context, v) - kl);
            dg += cfg.kl_beta * dkl;
          }
          ggrad[j] += inv_grp * inv_len * dg;
        }
      }
    }

    surrogate += inv_b * n_g * gsurr;
    kl_total += inv_b * n_g * gkl;
    ent_total += inv_b * n_g * gent;
    const double scale = inv_b * n_g;
    for (std::size_t j = 0; j < ggrad.size(); ++j)
      out.grad[j] += scale * ggrad[j];
  }

  out.loss = -surrogate + cfg.kl_beta * kl_total;
  out.metrics.mean_kl = kl_total;
  out.metrics.mean_entropy = ent_total;
  double norm2 = 0.0;
  for (double x : out.grad) norm2 += x * x;
  out.metrics.grad_norm = std::sqrt(norm2);
  return out;
}

}  // namespace tirlab::grpo
