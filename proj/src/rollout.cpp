#include "tirlab/rollout.hpp"

#include <stdexcept>

#include "tirlab/reward.hpp"

namespace tirlab::env {

const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> v = [] {
    std::vector<std::string> out = {"<reasoning>", "</reasoning>",
                                    "<tool_call>", "</tool_call>",
                                    "<answer>",    "</answer>"};
    const std::vector<std::string> words = {"think", "recall", "verify"};
    out.insert(out.end(), words.begin(), words.end());
    const auto& keys = retrieval_keys();
    out.insert(out.end(), keys.begin(), keys.end());
    const auto& answers = answer_words();
    out.insert(out.end(), answers.begin(), answers.end());
    out.push_back("<eos>");
    return out;
  }();
  return v;
}

const std::vector<std::string>& retrieval_keys() {
  static const std::vector<std::string> v = {"cities", "rivers", "metals",
                                             "colors", "fauna"};
  return v;
}

const std::vector<std::string>& answer_words() {
  static const std::vector<std::string> v = {
      "alpha", "bravo",   "charlie", "delta", "echo",   "foxtrot",
      "golf",  "hotel",   "india",   "juliet", "kilo",  "lima"};
  return v;
}

int context_id(int bucket, int step, ActionClass cls) {
  if (bucket < 0 || bucket >= kNumBuckets)
    throw std::out_of_range("context_id: bucket");
  const int s = std::min(step, kMaxRolloutTokens - 1);
  return (bucket * kMaxRolloutTokens + s) * kNumClasses +
         static_cast<int>(cls);
}

grpo::ToyPolicy uniform_policy() {
  return grpo::ToyPolicy(kNumContexts, kVocabSize);
}

namespace {

bool is_word(int t) { return t >= kFirstWord && t < kFirstKey; }
bool is_key(int t) { return t >= kFirstKey && t < kFirstAnswer; }

ActionClass class_of_token(int t) {
  switch (t) {
    case kOpenReasoning: return ActionClass::kOpenReasoning;
    case kCloseReasoning: return ActionClass::kCloseReasoning;
    case kOpenTool: return ActionClass::kOpenTool;
    case kCloseTool: return ActionClass::kCloseTool;
    case kOpenAnswer: return ActionClass::kOpenAnswer;
    default:
      if (is_word(t)) return ActionClass::kWord;
      if (is_key(t)) return ActionClass::kKey;
      return ActionClass::kAnswerWord;
  }
}

// grammar-consistent continuations per class, boosted at init
std::vector<int> favored_tokens(ActionClass cls) {
  std::vector<int> out;
  switch (cls) {
    case ActionClass::kBos:
    case ActionClass::kObsHit:
    case ActionClass::kObsMiss:
      out = {kOpenReasoning};
      break;
    case ActionClass::kOpenReasoning:
      for (int t = kFirstWord; t < kFirstKey; ++t) out.push_back(t);
      break;
    case ActionClass::kWord:
      out = {kCloseReasoning};
      break;
    case ActionClass::kCloseReasoning:
      out = {kOpenTool, kOpenAnswer};
      break;
    case ActionClass::kOpenTool:
      for (int t = kFirstKey; t < kFirstAnswer; ++t) out.push_back(t);
      break;
    case ActionClass::kKey:
      out = {kCloseTool};
      break;
    case ActionClass::kOpenAnswer:
      for (int t = kFirstAnswer; t < kEos; ++t) out.push_back(t);
      break;
    case ActionClass::kAnswerWord:
      out = {kCloseAnswer};
      break;
    default:
      break;
  }
  return out;
}

}  // namespace

grpo::ToyPolicy warm_start_policy(double boost) {
  grpo::ToyPolicy p = uniform_policy();
  for (int b = 0; b < kNumBuckets; ++b) {
    for (int s = 0; s < kMaxRolloutTokens; ++s) {
      for (int c = 0; c < kNumClasses; ++c) {
        const auto cls = static_cast<ActionClass>(c);
        for (int t : favored_tokens(cls))
          p.add_logit(context_id(b, s, cls), t, boost);
        // keep multi-word reasoning and multi-word answers reachable
        if (cls == ActionClass::kWord) {
          for (int t = kFirstWord; t < kFirstKey; ++t)
            p.add_logit(context_id(b, s, cls), t, 0.3 * boost);
        }
        if (cls == ActionClass::kAnswerWord) {
          for (int t = kFirstAnswer; t < kEos; ++t)
            p.add_logit(context_id(b, s, cls), t, 0.3 * boost);
        }
      }
    }
  }
  return p;
}

double score_trajectory(const traj::ParseResult& parsed,
                        const std::string& gold, RewardKind kind) {
  const auto answer = traj::extract_answer(parsed.trajectory);
  if (kind == RewardKind::kBinary)
    return reward::exact_match(answer.value_or(""), gold);
  return reward::prs_short(parsed.report, answer.value_or(""), gold).total;
}

namespace {

grpo::Rollout sample_rollout(const grpo::ToyPolicy& policy,
                             const SyntheticTask& task, int bucket,
                             std::mt19937_64& rng,
                             const RolloutParams& params) {
  const auto& vocab = vocabulary();
  grpo::Rollout out;
  std::string raw;
  ActionClass cls = ActionClass::kBos;
  bool prev_content = false;
  bool in_tool_span = false;
  std::string tool_query;
  int tool_calls = 0;

  for (int step = 0; step < params.max_tokens; ++step) {
    const int ctx = context_id(bucket, step, cls);
    const int a = policy.sample(ctx, rng);
    out.tokens.push_back({ctx, a, policy.log_prob(ctx, a)});

    if (a == kEos) break;
    const bool tag = a < kFirstWord;
    if (tag) {
      raw += vocab[a];
      prev_content = false;
    } else {
      if (prev_content) raw += ' ';
      raw += vocab[a];
      prev_content = true;
    }

    if (a == kOpenTool) {
      in_tool_span = true;
      tool_query.clear();
    } else if (in_tool_span && !tag) {
      if (!tool_query.empty()) tool_query += ' ';
      tool_query += vocab[a];
    }

    if (a == kCloseTool) {
      in_tool_span = false;
      ++tool_calls;
      const auto it = task.retrieval_table.find(trim(tool_query));
      const bool hit =
          tool_calls <= params.max_tool_calls && it != task.retrieval_table.end();
      raw += "<observation>";
      raw += hit ? it->second : "no results";
      raw += "</observation>";
      prev_content = false;
      cls = hit ? ActionClass::kObsHit : ActionClass::kObsMiss;
      continue;
    }
    if (a == kCloseAnswer) break;
    cls = class_of_token(a);
  }

  const auto parsed = traj::parse_trajectory(raw);
  out.trajectory = parsed.trajectory;
  out.reward = score_trajectory(parsed, task.gold_answer, params.reward);
  return out;
}

}  // namespace

grpo::RolloutGroup rollout_group(const grpo::ToyPolicy& policy,
                                 const SyntheticTask& task, int g,
                                 std::mt19937_64& rng,
                                 const RolloutParams& params) {
  if (g < 2) throw std::invalid_argument("rollout_group: need g >= 2");
  grpo::RolloutGroup group;
  group.prompt_id = task.id;
  const int bucket = bucket_of(task.id);
  for (int i = 0; i < g; ++i)
    group.rollouts.push_back(
        sample_rollout(policy, task, bucket, rng, params));
  group.recompute_stats();
  return group;
}

EvalMetrics eval_policy(const grpo::ToyPolicy& policy,
                        const std::vector<SyntheticTask>& tasks,
                        std::mt19937_64& rng, const RolloutParams& params,
                        int rollouts_per_task) {
  if (tasks.empty()) throw std::invalid_argument("eval_policy: no tasks");
  if (rollouts_per_task < 1)
    throw std::invalid_argument("eval_policy: rollouts_per_task must be >= 1");
  EvalMetrics m;
  int n = 0;
  for (const SyntheticTask& task : tasks) {
    const int bucket = bucket_of(task.id);
    for (int i = 0; i < rollouts_per_task; ++i) {
      const grpo::Rollout r =
          sample_rollout(policy, task, bucket, rng, params);
      const auto parsed = traj::parse_trajectory(r.trajectory.raw);
      m.mean_reward += r.reward;
      if (reward::process_reward(parsed.report) >= 1.0) m.parse_success += 1.0;
      const auto ans = traj::extract_answer(parsed.trajectory);
      m.em += reward::exact_match(ans.value_or(""), task.gold_answer);
      ++n;
    }
  }
  m.mean_reward /= n;
  m.parse_success /= n;
  m.em /= n;
  return m;
}

}  // namespace tirlab::env
