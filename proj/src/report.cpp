#include "tirlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace tirlab::cli {

namespace {

std::vector<double> trailing_means(const std::vector<double>& xs, int window) {
  std::vector<double> out(xs.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += xs[i];
    if (i >= static_cast<std::size_t>(window)) acc -= xs[i - window];
    const int n = std::min<int>(window, static_cast<int>(i) + 1);
    out[i] = acc / n;
  }
  return out;
}

}  // namespace

int steps_to_plateau(const std::vector<double>& eval_rewards, int window,
                     double tol) {
  if (eval_rewards.empty())
    throw std::invalid_argument("steps_to_plateau: empty series");
  const std::vector<double> tm = trailing_means(eval_rewards, window);
  const double best = *std::max_element(tm.begin(), tm.end());
  const double floor = best - tol * std::abs(best);
  for (std::size_t i = 0; i < tm.size(); ++i) {
    if (tm[i] >= floor) return static_cast<int>(i);
  }
  return static_cast<int>(tm.size()) - 1;  // unreachable; best hits the bound
}

int steps_to_threshold(const std::vector<double>& series, double threshold) {
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i] >= threshold) return static_cast<int>(i);
  }
  return static_cast<int>(series.size());
}

ArmSummary summarize_run(const std::string& algorithm,
                         const std::string& reward, std::uint64_t seed,
                         const env::TrainRun& run) {
  if (run.history.empty())
    throw std::invalid_argument("summarize_run: empty history");
  ArmSummary s;
  s.algorithm = algorithm;
  s.reward = reward;
  s.seed = seed;
  s.steps = static_cast<int>(run.history.size());
  std::vector<double> eval_reward, parse;
  for (const env::StepMetrics& m : run.history) {
    eval_reward.push_back(m.eval_reward);
    parse.push_back(m.eval_parse_success);
  }
  const env::StepMetrics& last = run.history.back();
  s.final_eval_reward = last.eval_reward;
  s.final_em = last.eval_em;
  s.final_parse_success = last.eval_parse_success;
  s.plateau_step = steps_to_plateau(eval_reward);
  auto at = [&](double frac) {
    const int i = std::min<int>(static_cast<int>(frac * s.steps),
                                s.steps - 1);
    return parse[i];
  };
  s.parse_success_q1 = at(0.25);
  s.parse_success_q2 = at(0.50);
  s.parse_success_q3 = at(0.75);
  return s;
}

std::string summary_csv(const std::vector<ArmSummary>& arms) {
  std::string out =
      "algorithm,reward,seed,steps,final_eval_reward,final_em,"
      "final_parse_success,steps_to_plateau,parse_success_at_25pct,"
      "parse_success_at_50pct,parse_success_at_75pct\n";
  char buf[256];
  for (const ArmSummary& a : arms) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%s,%llu,%d,%.6g,%.6g,%.6g,%d,%.6g,%.6g,%.6g\n",
                  a.algorithm.c_str(), a.reward.c_str(),
                  static_cast<unsigned long long>(a.seed), a.steps,
                  a.final_eval_reward, a.final_em, a.final_parse_success,
                  a.plateau_step, a.parse_success_q1, a.parse_success_q2,
                  a.parse_success_q3);
    out += buf;
  }
  return out;
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median: empty");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::string summary_report(const std::vector<ArmSummary>& arms) {
  // median per (algorithm, reward) arm across seeds
  std::map<std::string, std::vector<const ArmSummary*>> by_arm;
  for (const ArmSummary& a : arms)
    by_arm[a.algorithm + "/" + a.reward].push_back(&a);
  std::string out = "arm                 seeds  final_reward  plateau  final_em\n";
  char buf[160];
  for (const auto& [name, group] : by_arm) {
    std::vector<double> fr, pl, em;
    for (const ArmSummary* a : group) {
      fr.push_back(a->final_eval_reward);
      pl.push_back(a->plateau_step);
      em.push_back(a->final_em);
    }
    std::snprintf(buf, sizeof(buf), "%-19s %5zu  %12.4f  %7.0f  %8.4f\n",
                  name.c_str(), group.size(), median(fr), median(pl),
                  median(em));
    out += buf;
  }
  return out;
}

}  // namespace tirlab::cli
