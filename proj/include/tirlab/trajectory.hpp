#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Tag-structured agent trajectories: <reasoning> ... <tool_call> ...
// <observation> ... repeated, then an optional final <answer>. Parsing is
// total: malformed text never throws, it degrades into a ParseReport that
// downstream rewards interpret.

namespace tirlab::traj {

struct TagScheme {
  std::string reasoning = "reasoning";
  std::string tool_call = "tool_call";
  std::string observation = "observation";
  std::string answer = "answer";
};

struct ToolCallStep {
  std::string reasoning;
  std::string tool_call;
  std::string observation;  // may be empty if the episode stopped early

  bool operator==(const ToolCallStep&) const = default;
};

struct FinalStep {
  std::string reasoning;
  std::optional<std::string> answer;  // present iff tagged and non-empty

  bool operator==(const FinalStep&) const = default;
};

struct Trajectory {
  std::vector<ToolCallStep> steps;
  FinalStep final;
  std::string raw;
};

struct TagError {
  std::size_t position = 0;  // byte offset where the problem was detected
  std::string description;

  bool operator==(const TagError&) const = default;
};

struct ParseReport {
  bool all_tool_calls_parseable = false;
  bool answer_parseable = false;
  bool format_complete = false;
  std::vector<TagError> tag_errors;

  bool operator==(const ParseReport&) const = default;
};

struct ParseResult {
  Trajectory trajectory;
  ParseReport report;
};

ParseResult parse_trajectory(const std::string& raw, const TagScheme& scheme = {});

// final.answer with surrounding whitespace stripped; nullopt when the
// trajectory has no parseable answer.
std::optional<std::string> extract_answer(const Trajectory& traj);

// Canonical tagged text. Re-parsing the output of a cleanly parsed
// trajectory reproduces the same structure.
std::string to_tagged_text(const Trajectory& traj, const TagScheme& scheme = {});

// Structural equality ignoring the raw text both were parsed from.
bool same_structure(const Trajectory& a, const Trajectory& b);

// --- JSONL transcripts -----------------------------------------------------

struct TranscriptRecord {
  std::string id;
  std::string raw;
  std::optional<std::string> gold_answer;
};

class JsonlError : public std::runtime_error {
 public:
  JsonlError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<TranscriptRecord> read_transcripts(const std::string& path);
void write_transcripts(const std::string& path,
                       const std::vector<TranscriptRecord>& records);

}  // namespace tirlab::traj
