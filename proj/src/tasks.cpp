#include "tirlab/tasks.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "tirlab/common.hpp"
#include "tirlab/rollout.hpp"

namespace tirlab::env {

int bucket_of(const std::string& id) {
  // "train-3-007" -> 3; anything else hashes
  const auto a = id.find('-');
  if (a != std::string::npos && a + 1 < id.size()) {
    const auto b = id.find('-', a + 1);
    if (b != std::string::npos && b == a + 2) {
      const char c = id[a + 1];
      if (c >= '0' && c <= '9') return (c - '0') % kNumBuckets;
    }
  }
  return static_cast<int>(fnv1a(id) % kNumBuckets);
}

namespace {

SyntheticTask make_task(const std::string& split, int bucket, int index,
                        const std::vector<std::string>& golds) {
  const auto& keys = retrieval_keys();
  char idbuf[32];
  std::snprintf(idbuf, sizeof(idbuf), "%s-%d-%03d", split.c_str(), bucket,
                index);
  SyntheticTask t;
  t.id = idbuf;
  t.question = "what is the " + keys[bucket] + " entry for record " +
               std::to_string(index) + "?";
  t.background =
      "record " + std::to_string(index) + " lives in the " + keys[bucket] +
      " index; querying the wrong index returns nothing useful.";
  t.gold_answer = golds[bucket];
  t.retrieval_table[keys[bucket]] = "the stored entry is " + golds[bucket];
  t.retrieval_table[keys[(bucket + 1) % kNumBuckets]] =
      "this index has no matching record";
  t.retrieval_table[keys[(bucket + 2) % kNumBuckets]] =
      "lookup returned an unrelated stub";
  return t;
}

}  // namespace

TaskSet generate_tasks(std::uint64_t seed, int n_train, int n_eval) {
  if (n_train < kNumBuckets || n_eval < kNumBuckets)
    throw std::invalid_argument("generate_tasks: need at least one task per bucket");

  // Bucket golds drawn without replacement; first three buckets answer with
  // one token, the last two with two (the hard tasks, where partial credit
  // from the short-form overlap score actually matters).
  auto rng = make_rng(seed, 0, "golds");
  std::vector<std::string> pool = answer_words();
  for (std::size_t i = pool.size(); i > 1; --i) {
    const std::size_t j =
        static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(pool[i - 1], pool[j < i ? j : i - 1]);
  }
  std::vector<std::string> golds(kNumBuckets);
  std::size_t next = 0;
  for (int b = 0; b < kNumBuckets; ++b) {
    golds[b] = pool[next++];
    if (b >= 3) golds[b] += " " + pool[next++];
  }

  TaskSet out;
  for (int i = 0; i < n_train; ++i)
    out.train.push_back(make_task("train", i % kNumBuckets, i, golds));
  for (int i = 0; i < n_eval; ++i)
    out.eval.push_back(make_task("eval", i % kNumBuckets, i, golds));
  return out;
}

void write_tasks_jsonl(const std::string& path, const TaskSet& tasks) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  auto dump = [&](const SyntheticTask& t) {
    nlohmann::json j{{"id", t.id},
                     {"question", t.question},
                     {"background", t.background},
                     {"gold_answer", t.gold_answer},
                     {"retrieval_table", t.retrieval_table}};
    out << j.dump() << "\n";
  };
  for (const SyntheticTask& t : tasks.train) dump(t);
  for (const SyntheticTask& t : tasks.eval) dump(t);
}

TaskSet read_tasks_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  TaskSet out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw traj::JsonlError(lineno, e.what());
    }
    try {
      SyntheticTask t;
      t.id = j.at("id").get<std::string>();
      t.question = j.at("question").get<std::string>();
      t.background = j.at("background").get<std::string>();
      t.gold_answer = j.at("gold_answer").get<std::string>();
      t.retrieval_table =
          j.at("retrieval_table").get<std::map<std::string, std::string>>();
      (t.id.rfind("eval", 0) == 0 ? out.eval : out.train).push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw traj::JsonlError(lineno, e.what());
    }
  }
  return out;
}

}  // namespace tirlab::env
