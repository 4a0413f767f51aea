#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tirlab/bleu.hpp"
#include "tirlab/judge.hpp"
#include "tirlab/trajectory.hpp"

// Staged ("progressive") reward shaping for tool-using trajectories.
// Stage gating: later reward components only unlock once the earlier ones
// clear their thresholds, so the policy is pushed to fix parse errors first,
// then format, then answer quality.

namespace tirlab::reward {

// lowercase, split on whitespace, strip leading/trailing punctuation per
// token, drop tokens that end up empty
Tokens tokenize(const std::string& text);
std::string normalize(const std::string& text);  // tokens re-joined by ' '

double exact_match(const std::string& pred, const std::string& gold);

// +1 all tool calls and the answer parse; 0 tool calls parse but the answer
// does not; -1 otherwise.
double process_reward(const traj::ParseReport& report);

// 0.1 for a complete, well-nested label package, else 0.
double format_reward(const traj::ParseReport& report);

inline constexpr double kFormatBonus = 0.1;

struct RewardBreakdown {
  double process = 0.0;
  double format = 0.0;
  double answer = 0.0;
  std::optional<double> judge;  // set only when a judge was consulted
  double total = 0.0;
};

// Short-form variant: answer stage is short_form_bleu against the gold,
// unlocked only when the process stage is fully clean.
RewardBreakdown prs_short(const traj::ParseReport& report,
                          const std::string& pred, const std::string& gold);

// Long-form variant: a judge verdict gates the answer stage. The judge is
// consulted only when process >= 1 (lazy; judge calls are the expensive
// part). JudgeUnavailable propagates to the caller.
RewardBreakdown prs_long(const traj::ParseReport& report,
                         const std::string& pred, const std::string& gold,
                         JudgeClient& judge, const std::string& question = "");

struct Stage {
  std::string id;
  double threshold = 0.0;  // gate for everything after this stage
};
using StageSpec = std::vector<Stage>;

double sigmoid(double x);

// R1 + sum_{k>=2} [prod_{j<k} 1(R_j >= eps_j)] * sigmoid(R_k).
// Throws std::invalid_argument when sizes mismatch or the spec is empty.
double prs_general(const std::vector<double>& stage_values,
                   const StageSpec& spec);

}  // namespace tirlab::reward
