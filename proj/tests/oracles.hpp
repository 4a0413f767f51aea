#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Independent reference implementations for the numeric tests. Deliberately
// written with different machinery than the library (position scans instead
// of hash maps, loops instead of closed forms) so shared bugs are unlikely.

namespace oracle {

inline bool ngram_equal(const std::vector<std::string>& a, std::size_t i,
                        const std::vector<std::string>& b, std::size_t j,
                        std::size_t n) {
  for (std::size_t k = 0; k < n; ++k)
    if (a[i + k] != b[j + k]) return false;
  return true;
}

inline int count_ngram(const std::vector<std::string>& hay,
                       const std::vector<std::string>& needle_src,
                       std::size_t at, std::size_t n) {
  if (hay.size() < n) return 0;
  int count = 0;
  for (std::size_t j = 0; j + n <= hay.size(); ++j)
    if (ngram_equal(hay, j, needle_src, at, n)) ++count;
  return count;
}

// Clipped modified n-gram precision by quadratic position scan. Returns -1
// when the candidate has no n-grams at all.
inline double modified_precision(const std::vector<std::string>& cand,
                                 const std::vector<std::string>& ref,
                                 std::size_t n) {
  if (cand.size() < n) return -1.0;
  const std::size_t total = cand.size() - n + 1;
  double clipped = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    bool seen_before = false;
    for (std::size_t j = 0; j < i; ++j) {
      if (ngram_equal(cand, j, cand, i, n)) {
        seen_before = true;
        break;
      }
    }
    if (seen_before) continue;  // each distinct n-gram counted once
    const int in_cand = count_ngram(cand, cand, i, n);
    const int in_ref = count_ngram(ref, cand, i, n);
    clipped += std::min(in_cand, in_ref);
  }
  return clipped / static_cast<double>(total);
}

inline double brevity_penalty(std::size_t c, std::size_t r) {
  if (c > r) return 1.0;
  return std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
}

inline double bleu(const std::vector<std::string>& cand,
                   const std::vector<std::string>& ref,
                   const std::vector<double>& weights) {
  if (cand.empty() || ref.empty())
    throw std::invalid_argument("oracle bleu: empty input");
  double log_sum = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const double p = modified_precision(cand, ref, k + 1);
    if (p <= 0.0) return 0.0;  // absent or zero precision kills the product
    log_sum += weights[k] * std::log(p);
  }
  return brevity_penalty(cand.size(), ref.size()) * std::exp(log_sum);
}

inline double short_form_bleu(const std::vector<std::string>& cand,
                              const std::vector<std::string>& ref) {
  if (cand.empty() || ref.empty())
    throw std::invalid_argument("oracle short_form_bleu: empty input");
  const std::size_t max_n = std::min<std::size_t>(4, cand.size());
  std::vector<double> weights(max_n, 1.0 / static_cast<double>(max_n));
  return bleu(cand, ref, weights);
}

// Central finite differences of a scalar function of a parameter vector.
template <typename LossFn>
std::vector<double> central_fd(LossFn&& loss, const std::vector<double>& at,
                               double h = 1e-6) {
  std::vector<double> grad(at.size(), 0.0);
  std::vector<double> p = at;
  for (std::size_t i = 0; i < at.size(); ++i) {
    p[i] = at[i] + h;
    const double up = loss(p);
    p[i] = at[i] - h;
    const double down = loss(p);
    p[i] = at[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

inline double rel_err(double got, double want) {
  const double scale = std::max({std::abs(got), std::abs(want), 1e-12});
  return std::abs(got - want) / scale;
}

inline double binomial_se(double p, int n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace oracle
