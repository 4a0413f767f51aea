#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "tirlab/trajectory.hpp"

using namespace tirlab;
using traj::parse_trajectory;
using traj::TagScheme;

namespace {

// the short tags used throughout the compact examples
const TagScheme kShort{"reasoning", "tool", "obs", "answer"};

std::string temp_path(const std::string& stem) {
  static std::mt19937_64 rng(std::random_device{}());
  return (std::filesystem::temp_directory_path() /
          (stem + "-" + std::to_string(rng())))
      .string();
}

}  // namespace

TEST_CASE("well-formed single-step trajectory parses completely") {
  const auto res = parse_trajectory(
      "<reasoning>r</reasoning><tool>q</tool><obs>o</obs>"
      "<reasoning>r2</reasoning><answer>x</answer>",
      kShort);
  REQUIRE(res.trajectory.steps.size() == 1);
  CHECK(res.trajectory.steps[0].reasoning == "r");
  CHECK(res.trajectory.steps[0].tool_call == "q");
  CHECK(res.trajectory.steps[0].observation == "o");
  CHECK(res.trajectory.final.reasoning == "r2");
  REQUIRE(res.trajectory.final.answer.has_value());
  CHECK(*res.trajectory.final.answer == "x");
  CHECK(res.report.all_tool_calls_parseable);
  CHECK(res.report.answer_parseable);
  CHECK(res.report.format_complete);
  CHECK(res.report.tag_errors.empty());
}

TEST_CASE("tool call without an answer leaves only the answer flag down") {
  const auto res = parse_trajectory("<reasoning>r</reasoning><tool>q</tool>", kShort);
  CHECK(res.report.all_tool_calls_parseable);
  CHECK_FALSE(res.report.answer_parseable);
  CHECK(res.trajectory.steps.size() == 1);
}

TEST_CASE("unclosed reasoning tag flags the format, answer still parses") {
  const auto res = parse_trajectory("<reasoning>r<answer>x</answer>", kShort);
  CHECK_FALSE(res.report.format_complete);
  CHECK(res.report.answer_parseable);
  CHECK(res.report.tag_errors.size() == 1);
  REQUIRE(res.trajectory.final.answer.has_value());
  CHECK(*res.trajectory.final.answer == "x");
}

TEST_CASE("observation bodies are opaque to the tag scanner") {
  const auto res = parse_trajectory(
      "<reasoning>look</reasoning><tool_call>q</tool_call>"
      "<observation>quoted <answer>nope</answer> text</observation>"
      "<answer>x</answer>");
  CHECK(res.report.format_complete);
  REQUIRE(res.trajectory.steps.size() == 1);
  CHECK(res.trajectory.steps[0].observation == "quoted <answer>nope</answer> text");
  REQUIRE(res.trajectory.final.answer.has_value());
  CHECK(*res.trajectory.final.answer == "x");
}

TEST_CASE("nested tags of the same kind are a format error") {
  const auto res = parse_trajectory(
      "<reasoning>a<reasoning>b</reasoning></reasoning>");
  CHECK_FALSE(res.report.format_complete);
  CHECK_FALSE(res.report.tag_errors.empty());
}

TEST_CASE("non-whitespace text outside tags is a format error") {
  const auto res = parse_trajectory("hello <answer>x</answer>");
  CHECK_FALSE(res.report.format_complete);
  REQUIRE(res.report.tag_errors.size() == 1);
  CHECK(res.report.tag_errors[0].position == 0);

  // one error per whitespace-delimited stray run, and whitespace alone is fine
  const auto runs = parse_trajectory("ab <answer>x</answer> cd ef");
  CHECK(runs.report.tag_errors.size() == 3);
  CHECK(parse_trajectory("  <answer>x</answer>\n").report.format_complete);
}

TEST_CASE("the last non-empty answer span wins") {
  const auto res = parse_trajectory("<answer>a</answer><answer>b</answer>");
  REQUIRE(res.trajectory.final.answer.has_value());
  CHECK(*res.trajectory.final.answer == "b");
  CHECK(res.report.format_complete);
}

TEST_CASE("whitespace-only answers count as absent") {
  const auto res = parse_trajectory("<answer>   </answer>");
  CHECK_FALSE(res.report.answer_parseable);
  CHECK_FALSE(res.trajectory.final.answer.has_value());
}

TEST_CASE("empty input has no complete label package") {
  const auto res = parse_trajectory("");
  CHECK_FALSE(res.report.format_complete);
  CHECK(res.report.tag_errors.empty());
  CHECK_FALSE(res.report.answer_parseable);
}

TEST_CASE("a step with empty reasoning fails the process predicate") {
  const auto res = parse_trajectory(
      "<reasoning>a<tool_call>q</tool_call><answer>x</answer>");
  CHECK_FALSE(res.report.all_tool_calls_parseable);
  CHECK(res.report.answer_parseable);
  CHECK_FALSE(res.report.format_complete);
}

TEST_CASE("extract_answer strips surrounding whitespace") {
  traj::Trajectory t;
  t.final.answer = "  Paris ";
  CHECK(traj::extract_answer(t) == "Paris");
  t.final.answer = "42";
  CHECK(traj::extract_answer(t) == "42");
  t.final.answer.reset();
  CHECK_FALSE(traj::extract_answer(t).has_value());
}

namespace {

traj::Trajectory random_trajectory(std::mt19937_64& rng) {
  static const std::vector<std::string> words = {"alpha", "beta", "gamma",
                                                 "delta", "epsilon"};
  auto word = [&] { return words[rng() % words.size()]; };
  traj::Trajectory t;
  const int steps = static_cast<int>(rng() % 4);
  for (int s = 0; s < steps; ++s) {
    traj::ToolCallStep st;
    st.reasoning = word() + " " + word();
    st.tool_call = word();
    if (rng() % 2) st.observation = word() + " value";
    t.steps.push_back(st);
  }
  if (rng() % 2) t.final.reasoning = word();
  if (steps == 0 || rng() % 4 != 0) t.final.answer = word();
  return t;
}

}  // namespace

TEST_CASE("serialize/parse round trip preserves structure and report") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 300; ++it) {
    const traj::Trajectory t = random_trajectory(rng);
    const std::string text = traj::to_tagged_text(t);
    if (text.empty()) continue;
    const auto first = parse_trajectory(text);
    CHECK(traj::same_structure(first.trajectory, t));
    const auto second = parse_trajectory(traj::to_tagged_text(first.trajectory));
    CHECK(traj::same_structure(first.trajectory, second.trajectory));
    CHECK(first.report == second.report);
    CHECK(first.report.tag_errors.empty());
    CHECK(first.report.format_complete);
  }
}

TEST_CASE("deleting any single tag breaks the complete label package") {
  // "</observation>" stays off the list: observation bodies are opaque, so
  // with two observations in play, dropping the first close tag makes the
  // first body legally swallow up to the second close.
  const std::vector<std::string> tags = {
      "<reasoning>", "</reasoning>", "<tool_call>", "</tool_call>",
      "<observation>", "<answer>", "</answer>"};
  std::mt19937_64 rng(23);
  int corrupted = 0;
  for (int it = 0; it < 200; ++it) {
    traj::Trajectory t = random_trajectory(rng);
    const std::string text = traj::to_tagged_text(t);
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    for (const std::string& tag : tags) {
      for (std::size_t at = text.find(tag); at != std::string::npos;
           at = text.find(tag, at + 1)) {
        hits.emplace_back(at, tag.size());
      }
    }
    if (hits.empty()) continue;
    const auto [at, len] = hits[rng() % hits.size()];
    std::string broken = text;
    broken.erase(at, len);
    CHECK_FALSE(parse_trajectory(broken).report.format_complete);
    ++corrupted;
  }
  CHECK(corrupted > 100);  // the generator actually exercised the property
}

TEST_CASE("parsing is deterministic") {
  const std::string raw =
      "<reasoning>r</reasoning><tool_call>q</tool_call>junk<answer>x</answer>";
  const auto a = parse_trajectory(raw);
  const auto b = parse_trajectory(raw);
  CHECK(traj::same_structure(a.trajectory, b.trajectory));
  CHECK(a.report == b.report);
}

TEST_CASE("transcript jsonl round trip") {
  const std::string path = temp_path("transcripts");
  std::vector<traj::TranscriptRecord> recs;
  recs.push_back({"t1", "<answer>x</answer>", "x"});
  recs.push_back({"t2", "<reasoning>hm</reasoning>", std::nullopt});
  traj::write_transcripts(path, recs);
  const auto back = traj::read_transcripts(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].id == "t1");
  CHECK(back[0].raw == "<answer>x</answer>");
  CHECK(back[0].gold_answer == "x");
  CHECK(back[1].id == "t2");
  CHECK_FALSE(back[1].gold_answer.has_value());
  std::remove(path.c_str());
}

TEST_CASE("malformed jsonl reports the offending line") {
  const std::string path = temp_path("transcripts-bad");
  {
    std::ofstream out(path);
    out << R"({"id":"ok","raw":"<answer>x</answer>"})" << "\n";
    out << "{not json\n";
  }
  try {
    traj::read_transcripts(path);
    FAIL("expected JsonlError");
  } catch (const traj::JsonlError& e) {
    CHECK(e.line() == 2);
  }
  {
    std::ofstream out(path);
    out << R"({"raw":"missing id"})" << "\n";
  }
  CHECK_THROWS_AS(traj::read_transcripts(path), traj::JsonlError);
  std::remove(path.c_str());
}
