#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tirlab/config.hpp"
#include "tirlab/tasks.hpp"
#include "tirlab/train.hpp"

namespace tirlab::cli {

// Command bodies shared by the tirlab binary and the tests. Each returns a
// process exit code (0 ok, 1 runtime failure, 2 config error) and reports
// failures on stderr rather than throwing.

// file (optional) -> TIRLAB_* env vars -> key=value overrides, then validate.
// Throws ConfigError.
RunConfig effective_config(const std::string& config_path,
                           const std::vector<std::string>& overrides);

env::TaskSet load_or_generate_tasks(const RunConfig& cfg);

// Runs training and writes metrics.jsonl, policy.json, config.txt and
// manifest.json into cfg.output_dir.
int cmd_train(const RunConfig& cfg);

// Cross-product of algorithms x rewards x seeds, one subdirectory per run
// under base.output_dir, plus summary.csv and report.txt. Requires at least
// two algorithms or two reward variants.
int cmd_compare(const RunConfig& base, std::vector<std::string> algorithms,
                std::vector<std::string> rewards,
                std::vector<std::uint64_t> seeds);

struct ScoreOptions {
  std::string transcripts_path;
  std::string gold_path;          // optional; falls back to embedded golds
  std::string variant = "short";  // short | long
  std::string out_path;           // empty = stdout
};

// Offline reward scoring: one breakdown JSON object per transcript line.
int cmd_score(const RunConfig& cfg, const ScoreOptions& opts);

int cmd_gen_tasks(std::uint64_t seed, const std::string& out_path,
                  int n_train, int n_eval);

}  // namespace tirlab::cli
