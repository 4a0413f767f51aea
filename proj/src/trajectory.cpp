#include "tirlab/trajectory.hpp"

#include <array>
#include <cctype>
#include <fstream>

#include "json.hpp"
#include "tirlab/common.hpp"

namespace tirlab::traj {

namespace {

enum Kind { kReasoning = 0, kToolCall = 1, kObservation = 2, kAnswer = 3 };

struct Span {
  int kind;
  std::string content;
  std::size_t pos;
  bool ok;  // opened and closed by matching tags
};

struct Scanner {
  std::array<std::string, 4> open, close;

  explicit Scanner(const TagScheme& s) {
    const std::array<const std::string*, 4> names = {
        &s.reasoning, &s.tool_call, &s.observation, &s.answer};
    for (int k = 0; k < 4; ++k) {
      open[k] = "<" + *names[k] + ">";
      close[k] = "</" + *names[k] + ">";
    }
  }

  int match(const std::string& raw, std::size_t i,
            const std::array<std::string, 4>& tags) const {
    for (int k = 0; k < 4; ++k) {
      if (raw.compare(i, tags[k].size(), tags[k]) == 0) return k;
    }
    return -1;
  }
};

std::string tag_name(const Scanner& sc, int kind) {
  // open tag minus the angle brackets
  return sc.open[kind].substr(1, sc.open[kind].size() - 2);
}

}  // namespace

ParseResult parse_trajectory(const std::string& raw, const TagScheme& scheme) {
  const Scanner sc(scheme);
  std::vector<Span> spans;
  std::vector<TagError> errors;

  int cur = -1;  // kind currently open, -1 = outside
  std::size_t cur_pos = 0;
  std::string buf;
  bool in_stray = false;  // collapses a run of stray chars into one error

  std::size_t i = 0;
  while (i < raw.size()) {
    // Observation bodies are environment-inserted and may quote anything,
    // including tag-shaped text: treat them as opaque until the close tag.
    if (cur == kObservation) {
      if (raw.compare(i, sc.close[kObservation].size(),
                      sc.close[kObservation]) == 0) {
        spans.push_back({cur, buf, cur_pos, true});
        cur = -1;
        buf.clear();
        i += sc.close[kObservation].size();
      } else {
        buf.push_back(raw[i++]);
      }
      continue;
    }

    const int ko = sc.match(raw, i, sc.open);
    const int kc = ko >= 0 ? -1 : sc.match(raw, i, sc.close);

    if (ko >= 0) {
      if (cur >= 0) {
        errors.push_back({i, (ko == cur ? "nested <" : "unclosed <") +
                                 tag_name(sc, cur) + "> tag"});
        spans.push_back({cur, buf, cur_pos, false});
      }
      cur = ko;
      cur_pos = i;
      buf.clear();
      in_stray = false;
      i += sc.open[ko].size();
    } else if (kc >= 0) {
      if (cur == kc) {
        spans.push_back({cur, buf, cur_pos, true});
      } else if (cur >= 0) {
        errors.push_back({i, "</" + tag_name(sc, kc) + "> closes <" +
                                 tag_name(sc, cur) + ">"});
        spans.push_back({cur, buf, cur_pos, false});
      } else {
        errors.push_back({i, "unmatched </" + tag_name(sc, kc) + "> tag"});
      }
      cur = -1;
      buf.clear();
      in_stray = false;
      i += sc.close[kc].size();
    } else {
      if (cur >= 0) {
        buf.push_back(raw[i]);
      } else if (!std::isspace(static_cast<unsigned char>(raw[i]))) {
        if (!in_stray) {
          errors.push_back({i, "text outside tags"});
          in_stray = true;
        }
      } else {
        in_stray = false;
      }
      ++i;
    }
  }
  if (cur >= 0) {
    errors.push_back(
        {raw.size(), "unclosed <" + tag_name(sc, cur) + "> tag at end"});
    spans.push_back({cur, buf, cur_pos, false});
  }

  // Assemble steps from the well-tagged spans, in order. A reasoning span is
  // consumed by the next tool call or answer; an observation attaches to the
  // tool call it immediately follows.
  ParseResult out;
  out.trajectory.raw = raw;

  bool tool_span_failed = false;
  std::optional<std::string> pending_reasoning;
  bool expecting_obs = false;
  for (const Span& sp : spans) {
    if (!sp.ok) {
      if (sp.kind == kToolCall) tool_span_failed = true;
      expecting_obs = false;
      continue;
    }
    switch (sp.kind) {
      case kReasoning:
        pending_reasoning = sp.content;
        expecting_obs = false;
        break;
      case kToolCall:
        out.trajectory.steps.push_back(
            {pending_reasoning.value_or(""), sp.content, ""});
        pending_reasoning.reset();
        expecting_obs = true;
        break;
      case kObservation:
        if (expecting_obs) out.trajectory.steps.back().observation = sp.content;
        expecting_obs = false;
        break;
      case kAnswer:
        // last answer span wins; whitespace-only answers count as absent
        if (!trim(sp.content).empty()) {
          out.trajectory.final.answer = sp.content;
          out.trajectory.final.reasoning = pending_reasoning.value_or("");
          pending_reasoning.reset();
        }
        expecting_obs = false;
        break;
    }
  }
  if (!out.trajectory.final.answer.has_value() && pending_reasoning) {
    out.trajectory.final.reasoning = *pending_reasoning;
  }

  ParseReport& rep = out.report;
  rep.tag_errors = std::move(errors);
  bool steps_ok = !tool_span_failed;
  for (const ToolCallStep& st : out.trajectory.steps) {
    if (trim(st.reasoning).empty() || trim(st.tool_call).empty())
      steps_ok = false;
  }
  rep.all_tool_calls_parseable = steps_ok;  // vacuously true with no calls
  rep.answer_parseable = out.trajectory.final.answer.has_value();
  rep.format_complete = rep.tag_errors.empty() && !spans.empty();
  return out;
}

std::optional<std::string> extract_answer(const Trajectory& traj) {
  if (!traj.final.answer) return std::nullopt;
  return trim(*traj.final.answer);
}

std::string to_tagged_text(const Trajectory& traj, const TagScheme& scheme) {
  auto wrap = [](const std::string& name, const std::string& body) {
    return "<" + name + ">" + body + "</" + name + ">";
  };
  std::string out;
  for (const ToolCallStep& st : traj.steps) {
    out += wrap(scheme.reasoning, st.reasoning);
    out += wrap(scheme.tool_call, st.tool_call);
    if (!st.observation.empty()) out += wrap(scheme.observation, st.observation);
  }
  if (!traj.final.reasoning.empty())
    out += wrap(scheme.reasoning, traj.final.reasoning);
  if (traj.final.answer) out += wrap(scheme.answer, *traj.final.answer);
  return out;
}

bool same_structure(const Trajectory& a, const Trajectory& b) {
  return a.steps == b.steps && a.final == b.final;
}

std::vector<TranscriptRecord> read_transcripts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<TranscriptRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw JsonlError(lineno, e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("raw"))
      throw JsonlError(lineno, "expected object with id and raw fields");
    TranscriptRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.raw = j.at("raw").get<std::string>();
    if (j.contains("gold_answer") && !j.at("gold_answer").is_null())
      rec.gold_answer = j.at("gold_answer").get<std::string>();
    out.push_back(std::move(rec));
  }
  return out;
}

void write_transcripts(const std::string& path,
                       const std::vector<TranscriptRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (const TranscriptRecord& rec : records) {
    nlohmann::json j{{"id", rec.id}, {"raw", rec.raw}};
    if (rec.gold_answer) j["gold_answer"] = *rec.gold_answer;
    out << j.dump() << "\n";
  }
}

}  // namespace tirlab::traj
