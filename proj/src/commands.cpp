#include "tirlab/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "tirlab/judge.hpp"
#include "tirlab/report.hpp"
#include "tirlab/reward.hpp"
#include "tirlab/trajectory.hpp"
#include "tirlab/version.hpp"

namespace tirlab::cli {

namespace fs = std::filesystem;

namespace {

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << content;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

void write_run_artifacts(const RunConfig& cfg, const env::TrainResult& result) {
  const fs::path dir(cfg.output_dir);
  write_text_file(dir / "metrics.jsonl", env::metrics_jsonl(result.run.history));
  write_text_file(dir / "policy.json",
                  env::policy_snapshot(result.policy).dump(2) + "\n");
  write_text_file(dir / "config.txt", cfg.serialize());
  nlohmann::json manifest{{"config_hash", cfg.hash()},
                          {"seed", cfg.seed},
                          {"code_version", std::string(kVersion)}};
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::unique_ptr<reward::JudgeClient> make_judge(const RunConfig& cfg) {
  if (cfg.judge_mode == "http") {
    reward::HttpJudgeConfig jc;
    jc.endpoint = cfg.judge_endpoint;
    jc.timeout_ms = cfg.judge_timeout_ms;
    jc.retries = cfg.judge_retries;
    return std::make_unique<reward::HttpJudge>(jc);
  }
  return std::make_unique<reward::MockJudge>(cfg.judge_cutoff);
}

// Gold files are JSONL of {"id": ..., "gold_answer": ...}.
std::map<std::string, std::string> read_gold_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open gold file " + path);
  std::map<std::string, std::string> golds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") ||
        !j.contains("gold_answer") || !j["id"].is_string() ||
        !j["gold_answer"].is_string()) {
      throw traj::JsonlError(lineno, "gold record needs string id and gold_answer");
    }
    golds[j["id"].get<std::string>()] = j["gold_answer"].get<std::string>();
  }
  return golds;
}

}  // namespace

RunConfig effective_config(const std::string& config_path,
                           const std::vector<std::string>& overrides) {
  RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
  apply_env(cfg);
  apply_overrides(cfg, overrides);
  cfg.validate();
  return cfg;
}

env::TaskSet load_or_generate_tasks(const RunConfig& cfg) {
  if (cfg.task_set.empty()) return env::generate_tasks(env::kStockTaskSeed);
  return env::read_tasks_jsonl(cfg.task_set);
}

int cmd_train(const RunConfig& cfg) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const env::TaskSet tasks = load_or_generate_tasks(cfg);
    const env::TrainResult result = env::train(cfg.to_train_config(), tasks);
    write_run_artifacts(cfg, result);
    std::cout << "wrote " << result.run.history.size() << " step records to "
              << cfg.output_dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_compare(const RunConfig& base, std::vector<std::string> algorithms,
                std::vector<std::string> rewards,
                std::vector<std::uint64_t> seeds) {
  if (algorithms.empty()) algorithms = {base.algorithm};
  if (rewards.empty()) rewards = {base.reward};
  if (seeds.empty()) seeds = {base.seed};
  if (algorithms.size() < 2 && rewards.size() < 2) {
    std::cerr << "error: compare needs at least two algorithms or two reward "
                 "variants\n";
    return 2;
  }
  try {
    const env::TaskSet tasks = load_or_generate_tasks(base);
    std::vector<ArmSummary> arms;
    for (const std::string& alg : algorithms) {
      for (const std::string& rew : rewards) {
        for (std::uint64_t seed : seeds) {
          RunConfig sub = base;
          sub.algorithm = alg;
          sub.reward = rew;
          sub.seed = seed;
          sub.output_dir = base.output_dir + "/" + alg + "-" + rew + "-seed" +
                           std::to_string(seed);
          sub.validate();
          std::cout << "running " << alg << "/" << rew << " seed " << seed
                    << "...\n";
          const env::TrainResult result =
              env::train(sub.to_train_config(), tasks);
          write_run_artifacts(sub, result);
          arms.push_back(summarize_run(alg, rew, seed, result.run));
        }
      }
    }
    write_text_file(fs::path(base.output_dir) / "summary.csv",
                    summary_csv(arms));
    const std::string report = summary_report(arms);
    write_text_file(fs::path(base.output_dir) / "report.txt", report);
    std::cout << report;
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_score(const RunConfig& cfg, const ScoreOptions& opts) {
  if (opts.variant != "short" && opts.variant != "long") {
    std::cerr << "error: unknown reward variant '" << opts.variant << "'\n";
    return 2;
  }
  std::vector<traj::TranscriptRecord> records;
  std::map<std::string, std::string> golds;
  try {
    records = traj::read_transcripts(opts.transcripts_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << opts.transcripts_path << ": " << e.what() << "\n";
    return 1;
  }
  try {
    if (!opts.gold_path.empty()) golds = read_gold_file(opts.gold_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << opts.gold_path << ": " << e.what() << "\n";
    return 1;
  }
  try {
    std::unique_ptr<reward::JudgeClient> judge;
    if (opts.variant == "long") judge = make_judge(cfg);

    std::ostringstream out;
    for (const traj::TranscriptRecord& rec : records) {
      std::string gold;
      if (auto it = golds.find(rec.id); it != golds.end()) {
        gold = it->second;
      } else if (rec.gold_answer.has_value()) {
        gold = *rec.gold_answer;
      } else {
        std::cerr << "error: no gold answer for id '" << rec.id << "'\n";
        return 1;
      }
      const traj::ParseResult parsed = traj::parse_trajectory(rec.raw);
      const std::string pred =
          traj::extract_answer(parsed.trajectory).value_or("");
      const reward::RewardBreakdown b =
          opts.variant == "short"
              ? reward::prs_short(parsed.report, pred, gold)
              : reward::prs_long(parsed.report, pred, gold, *judge);
      nlohmann::json j{{"id", rec.id},
                       {"process", b.process},
                       {"format", b.format},
                       {"answer", b.answer},
                       {"total", b.total}};
      if (b.judge.has_value()) j["judge"] = *b.judge;
      out << j.dump() << "\n";
    }
    if (opts.out_path.empty()) {
      std::cout << out.str();
    } else {
      write_text_file(opts.out_path, out.str());
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_gen_tasks(std::uint64_t seed, const std::string& out_path, int n_train,
                  int n_eval) {
  try {
    const env::TaskSet tasks = env::generate_tasks(seed, n_train, n_eval);
    const fs::path path(out_path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    env::write_tasks_jsonl(out_path, tasks);
    std::cout << "wrote " << tasks.train.size() << " train / "
              << tasks.eval.size() << " eval tasks to " << out_path << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tirlab::cli
