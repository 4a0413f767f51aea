#include "tirlab/judge.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "httplib.h"
#include "json.hpp"
#include "tirlab/reward.hpp"

namespace tirlab::reward {

double token_f1(const std::string& a, const std::string& b) {
  const Tokens ta = tokenize(a), tb = tokenize(b);
  if (ta.empty() || tb.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const std::string& t : ta) ++counts[t];
  int overlap = 0;
  for (const std::string& t : tb) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double p = static_cast<double>(overlap) / ta.size();
  const double r = static_cast<double>(overlap) / tb.size();
  return 2.0 * p * r / (p + r);
}

JudgeVerdict MockJudge::score(const std::string& /*question*/,
                              const std::string& answer,
                              const std::string& reference) {
  ++calls_;
  const double f1 = token_f1(answer, reference);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "token_f1=%.3f cutoff=%.3f", f1, cutoff_);
  return {f1 >= cutoff_ ? 1.0 : 0.0, buf};
}

namespace {

struct ParsedUrl {
  std::string host;
  int port = 80;
  std::string path = "/";
};

ParsedUrl parse_endpoint(const std::string& endpoint) {
  std::string rest = endpoint;
  const std::string scheme = "http://";
  if (rest.rfind(scheme, 0) == 0) rest = rest.substr(scheme.size());
  ParsedUrl u;
  const auto slash = rest.find('/');
  std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
  if (slash != std::string::npos) u.path = rest.substr(slash);
  const auto colon = hostport.find(':');
  if (colon == std::string::npos) {
    u.host = hostport;
  } else {
    u.host = hostport.substr(0, colon);
    u.port = std::stoi(hostport.substr(colon + 1));
  }
  if (u.host.empty()) throw JudgeUnavailable("bad judge endpoint: " + endpoint);
  return u;
}

// Scans for the rating marker; "Mismatch" must be tested before "Match".
std::optional<double> parse_rating(const std::string& body) {
  const std::string marker = "<Evaluation Rating>:";
  const auto at = body.find(marker);
  if (at == std::string::npos) return std::nullopt;
  std::size_t i = at + marker.size();
  while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i])))
    ++i;
  if (body.compare(i, 8, "Mismatch") == 0) return 0.0;
  if (body.compare(i, 5, "Match") == 0) return 1.0;
  return std::nullopt;
}

}  // namespace

JudgeVerdict HttpJudge::score(const std::string& question,
                              const std::string& answer,
                              const std::string& reference) {
  const ParsedUrl url = parse_endpoint(cfg_.endpoint);
  const nlohmann::json payload{{"question", question},
                               {"answer", answer},
                               {"reference", reference},
                               {"prompt_template_id", cfg_.prompt_template_id}};
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= std::max(0, cfg_.retries); ++attempt) {
    // one client per call: keeps concurrent scoring trivially safe
    httplib::Client client(url.host, url.port);
    client.set_connection_timeout(0, cfg_.timeout_ms * 1000);
    client.set_read_timeout(0, cfg_.timeout_ms * 1000);
    client.set_write_timeout(0, cfg_.timeout_ms * 1000);
    auto res = client.Post(url.path, payload.dump(), "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "http status " + std::to_string(res->status);
      continue;
    }
    const auto rating = parse_rating(res->body);
    if (!rating) {
      last_error = "no evaluation rating in response";
      continue;
    }
    return {*rating, *rating >= 1.0 ? "judge: Match" : "judge: Mismatch"};
  }
  throw JudgeUnavailable("judge at " + cfg_.endpoint +
                         " unavailable: " + last_error);
}

}  // namespace tirlab::reward
