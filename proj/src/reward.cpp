#include "tirlab/reward.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace tirlab::reward {

Tokens tokenize(const std::string& text) {
  Tokens out;
  std::string cur;
  auto flush = [&] {
    // strip punctuation runs at both edges, keep interior punctuation
    std::size_t b = 0, e = cur.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(cur[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(cur[e - 1]))) --e;
    if (e > b) out.push_back(cur.substr(b, e - b));
    cur.clear();
  };
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else {
      cur.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  flush();
  return out;
}

std::string normalize(const std::string& text) {
  std::string out;
  for (const std::string& tok : tokenize(text)) {
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

double exact_match(const std::string& pred, const std::string& gold) {
  return normalize(pred) == normalize(gold) ? 1.0 : 0.0;
}

double process_reward(const traj::ParseReport& report) {
  if (!report.all_tool_calls_parseable) return -1.0;
  return report.answer_parseable ? 1.0 : 0.0;
}

double format_reward(const traj::ParseReport& report) {
  return report.format_complete ? kFormatBonus : 0.0;
}

namespace {

// Never throws: stage logic occasionally hands BLEU degenerate input
// (punctuation-only answers tokenize to nothing) and that is worth 0, not an
// aborted batch.
double answer_bleu(const std::string& pred, const std::string& gold) {
  const Tokens cand = tokenize(pred);
  const Tokens ref = tokenize(gold);
  if (cand.empty() || ref.empty()) return 0.0;
  return short_form_bleu(cand, ref);
}

}  // namespace

RewardBreakdown prs_short(const traj::ParseReport& report,
                          const std::string& pred, const std::string& gold) {
  RewardBreakdown b;
  b.process = process_reward(report);
  b.format = format_reward(report);
  if (b.process >= 1.0) b.answer = answer_bleu(pred, gold);
  b.total = b.process + b.format + b.answer;
  return b;
}

RewardBreakdown prs_long(const traj::ParseReport& report,
                         const std::string& pred, const std::string& gold,
                         JudgeClient& judge, const std::string& question) {
  RewardBreakdown b;
  b.process = process_reward(report);
  b.format = format_reward(report);
  if (b.process >= 1.0) {
    const JudgeVerdict v = judge.score(question, pred, gold);
    b.judge = v.score;
    if (v.score >= judge.pass_threshold()) b.answer = answer_bleu(pred, gold);
  }
  b.total = b.process + b.format + b.judge.value_or(0.0) + b.answer;
  return b;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double prs_general(const std::vector<double>& stage_values,
                   const StageSpec& spec) {
  if (spec.empty()) throw std::invalid_argument("prs_general: empty stage spec");
  if (stage_values.size() != spec.size())
    throw std::invalid_argument(
        "prs_general: stage values and spec lengths differ");
  for (const Stage& s : spec) {
    if (!std::isfinite(s.threshold))
      throw std::invalid_argument("prs_general: non-finite threshold for " +
                                  s.id);
  }
  double total = stage_values[0];
  bool unlocked = true;
  for (std::size_t k = 1; k < stage_values.size(); ++k) {
    unlocked = unlocked && stage_values[k - 1] >= spec[k - 1].threshold;
    if (unlocked) total += sigmoid(stage_values[k]);
  }
  return total;
}

}  // namespace tirlab::reward
