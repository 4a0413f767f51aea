#pragma once

#include <random>
#include <string>
#include <vector>

#include "tirlab/grpo.hpp"
#include "tirlab/policy.hpp"
#include "tirlab/tasks.hpp"
#include "tirlab/trajectory.hpp"

// The generative side of the environment. The policy emits one vocabulary
// token per step; tag tokens open and close trajectory sections, content
// tokens fill them. Closing a tool call triggers a retrieval lookup and the
// environment splices the observation into the text (those characters are
// not policy tokens and carry no log-probabilities).

namespace tirlab::env {

// --- vocabulary ------------------------------------------------------------

enum Token : int {
  kOpenReasoning = 0,
  kCloseReasoning,
  kOpenTool,
  kCloseTool,
  kOpenAnswer,
  kCloseAnswer,
  kFirstWord,       // 3 reasoning filler words
  kFirstKey = 9,    // 5 retrieval keys, one per task bucket
  kFirstAnswer = 14,  // 12 answer words
  kEos = 26,
  kVocabSize = 27
};

const std::vector<std::string>& vocabulary();
const std::vector<std::string>& retrieval_keys();
const std::vector<std::string>& answer_words();

// --- policy contexts -------------------------------------------------------

// What the previous emission was; together with the task bucket and the step
// index this is the whole policy context, so every state is enumerable.
enum class ActionClass : int {
  kBos = 0,
  kOpenReasoning,
  kWord,
  kCloseReasoning,
  kOpenTool,
  kKey,
  kCloseTool,
  kObsHit,
  kObsMiss,
  kOpenAnswer,
  kAnswerWord,
  kCount
};

inline constexpr int kNumClasses = static_cast<int>(ActionClass::kCount);
inline constexpr int kMaxRolloutTokens = 26;
inline constexpr int kMaxToolCalls = 3;
inline constexpr int kNumContexts =
    kNumBuckets * kMaxRolloutTokens * kNumClasses;

int context_id(int bucket, int step, ActionClass cls);

grpo::ToyPolicy uniform_policy();

// Instruction-tuned-ish starting point: the grammar is mostly followed, the
// choices inside it (which key, which answer) are uniform and must be
// learned. boost is the logit bump on grammar-consistent tokens.
inline constexpr double kDefaultInitBoost = 5.0;
grpo::ToyPolicy warm_start_policy(double boost = kDefaultInitBoost);

// --- rollouts --------------------------------------------------------------

enum class RewardKind { kBinary, kPrs };

struct RolloutParams {
  RewardKind reward = RewardKind::kPrs;
  int max_tokens = kMaxRolloutTokens;
  int max_tool_calls = kMaxToolCalls;
};

double score_trajectory(const traj::ParseResult& parsed,
                        const std::string& gold, RewardKind kind);

// g trajectories for one task, rewards and group stats filled in,
// advantages left for the optimizer.
grpo::RolloutGroup rollout_group(const grpo::ToyPolicy& policy,
                                 const SyntheticTask& task, int g,
                                 std::mt19937_64& rng,
                                 const RolloutParams& params = {});

struct EvalMetrics {
  double mean_reward = 0.0;
  double parse_success = 0.0;  // fraction with a fully clean process stage
  double em = 0.0;
};

EvalMetrics eval_policy(const grpo::ToyPolicy& policy,
                        const std::vector<SyntheticTask>& tasks,
                        std::mt19937_64& rng, const RolloutParams& params = {},
                        int rollouts_per_task = 4);

}  // namespace tirlab::env
