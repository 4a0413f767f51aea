#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tirlab/commands.hpp"
#include "tirlab/tasks.hpp"
#include "tirlab/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for tool-integrated reasoning RL"};
  app.set_version_flag("--version", std::string(tirlab::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  auto add_config_opts = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "key = value config file");
    cmd->add_option("-s,--set", overrides,
                    "config override, e.g. --set seed=3 (repeatable)");
  };

  CLI::App* train = app.add_subcommand("train", "run one training loop");
  add_config_opts(train);

  std::vector<std::string> algorithms;
  std::vector<std::string> rewards;
  std::vector<std::uint64_t> seeds;
  CLI::App* compare =
      app.add_subcommand("compare", "cross-product of algorithms/rewards/seeds");
  add_config_opts(compare);
  compare->add_option("--algorithms", algorithms, "e.g. grpo,vspo")
      ->delimiter(',');
  compare->add_option("--rewards", rewards, "e.g. binary,prs")->delimiter(',');
  compare->add_option("--seeds", seeds, "e.g. 1,2,3")->delimiter(',');

  tirlab::cli::ScoreOptions sopts;
  CLI::App* score =
      app.add_subcommand("score", "score transcripts offline (JSONL in/out)");
  add_config_opts(score);
  score->add_option("transcripts", sopts.transcripts_path, "transcript JSONL")
      ->required();
  score->add_option("--gold", sopts.gold_path,
                    "JSONL of {id, gold_answer}; overrides embedded golds");
  score->add_option("--variant", sopts.variant, "short | long")
      ->check(CLI::IsMember({"short", "long"}));
  score->add_option("-o,--out", sopts.out_path, "output path (default stdout)");

  std::uint64_t gen_seed = tirlab::env::kStockTaskSeed;
  std::string gen_out = "tasks.jsonl";
  int gen_train = 50;
  int gen_eval = 20;
  CLI::App* gen = app.add_subcommand("gen-tasks", "emit a synthetic task set");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("-o,--out", gen_out, "output JSONL path");
  gen->add_option("--train-count", gen_train, "train tasks");
  gen->add_option("--eval-count", gen_eval, "held-out tasks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are config-class errors
  }

  if (*gen)
    return tirlab::cli::cmd_gen_tasks(gen_seed, gen_out, gen_train, gen_eval);

  tirlab::cli::RunConfig cfg;
  try {
    cfg = tirlab::cli::effective_config(config_path, overrides);
  } catch (const tirlab::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (*train) return tirlab::cli::cmd_train(cfg);
  if (*compare) return tirlab::cli::cmd_compare(cfg, algorithms, rewards, seeds);
  if (*score) return tirlab::cli::cmd_score(cfg, sopts);
  return 2;
}
