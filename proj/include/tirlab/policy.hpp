#pragma once

#include <random>
#include <string>
#include <vector>

#include "tirlab/common.hpp"

namespace tirlab::grpo {

// Tabular softmax policy over a finite context set. Small enough that every
// gradient is exact and cheap; the whole point is that optimizer math can be
// checked against finite differences instead of trusted.
class ToyPolicy {
 public:
  ToyPolicy(int num_contexts, int vocab_size)
      : num_contexts_(num_contexts),
        vocab_size_(vocab_size),
        logits_(static_cast<std::size_t>(num_contexts) * vocab_size, 0.0) {}

  int num_contexts() const { return num_contexts_; }
  int vocab_size() const { return vocab_size_; }

  double logit(int c, int v) const { return logits_[index(c, v)]; }
  void set_logit(int c, int v, double x) { logits_[index(c, v)] = x; }
  void add_logit(int c, int v, double x) { logits_[index(c, v)] += x; }

  std::vector<double>& params() { return logits_; }
  const std::vector<double>& params() const { return logits_; }

  std::vector<double> probs(int c) const;
  double log_prob(int c, int v) const;
  double entropy(int c) const;
  int sample(int c, std::mt19937_64& rng) const;

  // exact KL(p || q) for one context row; both policies must share shape
  static double kl_divergence(const ToyPolicy& p, const ToyPolicy& q, int c);

  std::size_t index(int c, int v) const {
    return static_cast<std::size_t>(c) * vocab_size_ + v;
  }

 private:
  int num_contexts_;
  int vocab_size_;
  std::vector<double> logits_;
};

}  // namespace tirlab::grpo
