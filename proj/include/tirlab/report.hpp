#pragma once

#include <string>
#include <vector>

#include "tirlab/train.hpp"

namespace tirlab::cli {

// First step whose trailing-`window` eval-reward mean is within `tol`
// (relative) of the best trailing mean anywhere in the run. Returned as a
// 0-based step index.
int steps_to_plateau(const std::vector<double>& eval_rewards, int window = 5,
                     double tol = 0.02);

// First step where `series` reaches `threshold`; series.size() when never.
int steps_to_threshold(const std::vector<double>& series, double threshold);

struct ArmSummary {
  std::string algorithm;
  std::string reward;
  std::uint64_t seed = 0;
  int steps = 0;
  double final_eval_reward = 0.0;
  double final_em = 0.0;
  double final_parse_success = 0.0;
  int plateau_step = 0;
  double parse_success_q1 = 0.0;  // at 25% / 50% / 75% of the run
  double parse_success_q2 = 0.0;
  double parse_success_q3 = 0.0;
};

ArmSummary summarize_run(const std::string& algorithm,
                         const std::string& reward, std::uint64_t seed,
                         const env::TrainRun& run);

std::string summary_csv(const std::vector<ArmSummary>& arms);
std::string summary_report(const std::vector<ArmSummary>& arms);

double median(std::vector<double> xs);

}  // namespace tirlab::cli
