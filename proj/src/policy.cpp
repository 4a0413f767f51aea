#include "tirlab/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace tirlab::grpo {

std::vector<double> ToyPolicy::probs(int c) const {
  std::vector<double> p(vocab_size_);
  double mx = logits_[index(c, 0)];
  for (int v = 1; v < vocab_size_; ++v) mx = std::max(mx, logits_[index(c, v)]);
  double z = 0.0;
  for (int v = 0; v < vocab_size_; ++v) {
    p[v] = std::exp(logits_[index(c, v)] - mx);
    z += p[v];
  }
  for (double& x : p) x /= z;
  return p;
}

double ToyPolicy::log_prob(int c, int v) const {
  double mx = logits_[index(c, 0)];
  for (int u = 1; u < vocab_size_; ++u) mx = std::max(mx, logits_[index(c, u)]);
  double z = 0.0;
  for (int u = 0; u < vocab_size_; ++u) z += std::exp(logits_[index(c, u)] - mx);
  return logits_[index(c, v)] - mx - std::log(z);
}

double ToyPolicy::entropy(int c) const {
  const std::vector<double> p = probs(c);
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

int ToyPolicy::sample(int c, std::mt19937_64& rng) const {
  const std::vector<double> p = probs(c);
  const double u = uniform01(rng);
  double acc = 0.0;
  for (int v = 0; v < vocab_size_; ++v) {
    acc += p[v];
    if (u < acc) return v;
  }
  return vocab_size_ - 1;  // guard against accumulated rounding
}

double ToyPolicy::kl_divergence(const ToyPolicy& p, const ToyPolicy& q, int c) {
  if (p.vocab_size_ != q.vocab_size_)
    throw std::invalid_argument("kl_divergence: vocab size mismatch");
  double kl = 0.0;
  const std::vector<double> pp = p.probs(c);
  for (int v = 0; v < p.vocab_size_; ++v) {
    if (pp[v] > 0.0) kl += pp[v] * (std::log(pp[v]) - q.log_prob(c, v));
  }
  return kl;
}

}  // namespace tirlab::grpo
