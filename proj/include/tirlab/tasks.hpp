#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tirlab::env {

// One synthetic retrieval task. The gold answer appears verbatim in exactly
// one retrieval_table document, so a correct lookup is always sufficient to
// answer.
struct SyntheticTask {
  std::string id;
  std::string question;
  std::string background;
  std::string gold_answer;
  std::map<std::string, std::string> retrieval_table;
};

struct TaskSet {
  std::vector<SyntheticTask> train;
  std::vector<SyntheticTask> eval;
};

inline constexpr int kNumBuckets = 5;
inline constexpr std::uint64_t kStockTaskSeed = 7;

// Tasks are grouped into buckets sharing a retrieval key and gold answer;
// ids generated here look like "train-3-007" with the bucket embedded.
// Foreign ids hash into a bucket instead.
int bucket_of(const std::string& id);

TaskSet generate_tasks(std::uint64_t seed, int n_train = 50, int n_eval = 20);

// Single JSONL file; the id prefix (train-/eval-) decides the split.
void write_tasks_jsonl(const std::string& path, const TaskSet& tasks);
TaskSet read_tasks_jsonl(const std::string& path);

}  // namespace tirlab::env
