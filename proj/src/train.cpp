#include "tirlab/train.hpp"

#include <stdexcept>

namespace tirlab::env {

nlohmann::json StepMetrics::to_json() const {
  return nlohmann::json{{"step", step},
                        {"loss", loss},
                        {"kl", kl},
                        {"entropy", entropy},
                        {"grad_norm", grad_norm},
                        {"mean_reward", mean_reward},
                        {"valid_group_fraction", valid_group_fraction},
                        {"dropped_count", dropped_count},
                        {"kept_count", kept_count},
                        {"max_n", max_n},
                        {"value_min", value_min},
                        {"value_median", value_median},
                        {"value_max", value_max},
                        {"fallback", fallback},
                        {"eval_reward", eval_reward},
                        {"eval_parse_success", eval_parse_success},
                        {"eval_em", eval_em}};
}

std::string metrics_jsonl(const std::vector<StepMetrics>& history) {
  std::string out;
  for (const StepMetrics& m : history) {
    out += m.to_json().dump();
    out += '\n';
  }
  return out;
}

nlohmann::json policy_snapshot(const grpo::ToyPolicy& policy) {
  nlohmann::json rows = nlohmann::json::array();
  for (int c = 0; c < policy.num_contexts(); ++c) {
    nlohmann::json row = nlohmann::json::array();
    for (int v = 0; v < policy.vocab_size(); ++v) row.push_back(policy.logit(c, v));
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"num_contexts", policy.num_contexts()},
                        {"vocab_size", policy.vocab_size()},
                        {"vocabulary", vocabulary()},
                        {"logits", std::move(rows)}};
}

TrainResult train(const TrainConfig& cfg, const TaskSet& tasks) {
  cfg.optim.validate();
  if (cfg.steps < 0) throw std::invalid_argument("train: negative step count");
  if (cfg.batch_size < 1 ||
      cfg.batch_size > static_cast<int>(tasks.train.size()))
    throw std::invalid_argument("train: batch_size out of range");
  if (tasks.eval.empty()) throw std::invalid_argument("train: no eval tasks");

  TrainResult result{TrainRun{cfg, {}}, warm_start_policy(cfg.init_boost)};
  grpo::ToyPolicy& policy = result.policy;
  const grpo::ToyPolicy ref = policy;  // frozen at initialization

  RolloutParams rollout = cfg.rollout;
  rollout.reward = cfg.reward;

  for (int step = 0; step < cfg.steps; ++step) {
    // distinct prompts via partial Fisher-Yates over task indices
    auto batch_rng = make_rng(cfg.seed, step, "batch");
    std::vector<int> idx(tasks.train.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    for (int i = 0; i < cfg.batch_size; ++i) {
      const int j =
          i + static_cast<int>(uniform01(batch_rng) *
                               static_cast<double>(idx.size() - i));
      std::swap(idx[i], idx[std::min<std::size_t>(j, idx.size() - 1)]);
    }

    grpo::Batch batch;
    for (int i = 0; i < cfg.batch_size; ++i) {
      const SyntheticTask& task = tasks.train[idx[i]];
      auto rng = make_rng(cfg.seed, step, "rollout:" + task.id);
      batch.groups.push_back(
          rollout_group(policy, task, cfg.optim.group_size, rng, rollout));
      batch.multiplicity[task.id] = 1;
    }

    StepMetrics m;
    m.step = step;
    int rollouts = 0, valid = 0;
    for (const grpo::RolloutGroup& g : batch.groups) {
      for (const grpo::Rollout& r : g.rollouts) {
        m.mean_reward += r.reward;
        ++rollouts;
      }
      if (g.var >= cfg.optim.var_threshold) ++valid;
    }
    m.mean_reward /= rollouts;
    m.valid_group_fraction =
        static_cast<double>(valid) / static_cast<double>(batch.groups.size());

    grpo::Batch update = std::move(batch);
    vspo::Telemetry tele;
    tele.kept_count = static_cast<int>(update.groups.size());
    if (cfg.algorithm == Algorithm::kVspo) {
      auto vspo_rng = make_rng(cfg.seed, step, "vspo");
      try {
        update = vspo::vspo_transform(update, cfg.optim, vspo_rng,
                                      cfg.sampler, &tele);
      } catch (const vspo::AllDropped&) {
        tele.fallback = true;
        tele.kept_count = 0;
        tele.dropped_count = static_cast<int>(update.groups.size());
        for (grpo::RolloutGroup& g : update.groups)
          g.advantages = grpo::grpo_advantages(g.rewards());
      }
    } else {
      for (grpo::RolloutGroup& g : update.groups)
        g.advantages = grpo::grpo_advantages(g.rewards());
    }

    const grpo::BatchLossResult lr =
        grpo::batch_loss(update, policy, ref, cfg.optim);
    for (std::size_t j = 0; j < policy.params().size(); ++j)
      policy.params()[j] -= cfg.optim.learning_rate * lr.grad[j];

    m.loss = lr.loss;
    m.kl = lr.metrics.mean_kl;
    m.entropy = lr.metrics.mean_entropy;
    m.grad_norm = lr.metrics.grad_norm;
    m.dropped_count = tele.dropped_count;
    m.kept_count = tele.kept_count;
    m.max_n = tele.max_n;
    m.value_min = tele.value_min;
    m.value_median = tele.value_median;
    m.value_max = tele.value_max;
    m.fallback = tele.fallback;

    auto eval_rng = make_rng(cfg.seed, step, "eval");
    const EvalMetrics ev =
        eval_policy(policy, tasks.eval, eval_rng, rollout, cfg.eval_rollouts);
    m.eval_reward = ev.mean_reward;
    m.eval_parse_success = ev.parse_success;
    m.eval_em = ev.em;

    result.run.history.push_back(m);
  }
  return result;
}

}  // namespace tirlab::env
