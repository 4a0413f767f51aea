#pragma once

#include <stdexcept>
#include <string>

namespace tirlab::reward {

struct JudgeVerdict {
  double score = 0.0;  // in [min_score, max_score] of the client
  std::string rationale;
};

// Transport/parse failure talking to an external judge. Deliberately distinct
// from a Mismatch verdict: callers are expected to fail the batch, not score
// it zero.
class JudgeUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual JudgeVerdict score(const std::string& question,
                             const std::string& answer,
                             const std::string& reference) = 0;
  // score at or above which the verdict counts as a pass
  virtual double pass_threshold() const { return 1.0; }
};

// Multiset token-overlap F1 between two texts after normalization.
double token_f1(const std::string& a, const std::string& b);

// Rule-based stand-in for an LLM judge: pass iff token F1 >= cutoff.
// Scores are {0, 1}.
class MockJudge : public JudgeClient {
 public:
  explicit MockJudge(double cutoff = 0.6) : cutoff_(cutoff) {}
  JudgeVerdict score(const std::string& question, const std::string& answer,
                     const std::string& reference) override;
  int calls() const { return calls_; }

 private:
  double cutoff_;
  int calls_ = 0;
};

struct HttpJudgeConfig {
  std::string endpoint;  // http://host:port/path
  int timeout_ms = 5000;
  int retries = 1;  // extra attempts after the first
  std::string prompt_template_id = "qa-match-v1";
};

// Client for an external judge service. POSTs JSON {question, answer,
// reference, prompt_template_id} and scans the response text for an
// "<Evaluation Rating>:" marker followed by Match or Mismatch.
class HttpJudge : public JudgeClient {
 public:
  explicit HttpJudge(HttpJudgeConfig cfg) : cfg_(std::move(cfg)) {}
  JudgeVerdict score(const std::string& question, const std::string& answer,
                     const std::string& reference) override;

 private:
  HttpJudgeConfig cfg_;
};

}  // namespace tirlab::reward
