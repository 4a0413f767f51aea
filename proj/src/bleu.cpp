#include "tirlab/bleu.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace tirlab::reward {

namespace {

// n-grams keyed by the joined tokens; \x1f never appears in real tokens.
std::unordered_map<std::string, int> ngram_counts(const Tokens& toks,
                                                  std::size_t n) {
  std::unordered_map<std::string, int> counts;
  if (toks.size() < n) return counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key = toks[i];
    for (std::size_t j = 1; j < n; ++j) {
      key += '\x1f';
      key += toks[i + j];
    }
    ++counts[key];
  }
  return counts;
}

// clipped matches / total candidate n-grams; -1 when no candidate n-grams
double modified_precision(const Tokens& cand, const Tokens& ref,
                          std::size_t n) {
  if (cand.size() < n) return -1.0;
  const auto cand_counts = ngram_counts(cand, n);
  const auto ref_counts = ngram_counts(ref, n);
  long matches = 0, total = 0;
  for (const auto& [key, c] : cand_counts) {
    total += c;
    auto it = ref_counts.find(key);
    if (it != ref_counts.end()) matches += std::min(c, it->second);
  }
  return static_cast<double>(matches) / static_cast<double>(total);
}

}  // namespace

double brevity_penalty(std::size_t candidate_len, std::size_t reference_len) {
  if (candidate_len > reference_len) return 1.0;
  return std::exp(1.0 - static_cast<double>(reference_len) /
                            static_cast<double>(candidate_len));
}

double bleu(const Tokens& candidate, const Tokens& reference,
            const std::vector<double>& weights) {
  if (candidate.empty()) throw std::invalid_argument("bleu: empty candidate");
  if (reference.empty()) throw std::invalid_argument("bleu: empty reference");
  if (weights.empty()) throw std::invalid_argument("bleu: empty weights");
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("bleu: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("bleu: weights must sum to 1");

  double log_score = 0.0;
  for (std::size_t n = 1; n <= weights.size(); ++n) {
    const double w = weights[n - 1];
    if (w <= 0.0) continue;
    const double p = modified_precision(candidate, reference, n);
    if (p <= 0.0) return 0.0;  // undefined or zero precision, unsmoothed
    log_score += w * std::log(p);
  }
  return brevity_penalty(candidate.size(), reference.size()) *
         std::exp(log_score);
}

double short_form_bleu(const Tokens& candidate, const Tokens& reference) {
  if (candidate.empty())
    throw std::invalid_argument("short_form_bleu: empty candidate");
  if (reference.empty())
    throw std::invalid_argument("short_form_bleu: empty reference");
  const std::size_t max_n = std::min<std::size_t>(4, candidate.size());
  const std::vector<double> weights(max_n, 1.0 / static_cast<double>(max_n));
  return bleu(candidate, reference, weights);
}

}  // namespace tirlab::reward
