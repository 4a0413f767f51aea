#pragma once

#include <string>
#include <vector>

namespace tirlab::reward {

using Tokens = std::vector<std::string>;

// Corpus-of-one sentence BLEU with modified n-gram precision and brevity
// penalty. No smoothing: any required precision of zero makes the whole
// score zero. Throws std::invalid_argument on empty candidate/reference or
// malformed weights (negative, or not summing to 1).
double bleu(const Tokens& candidate, const Tokens& reference,
            const std::vector<double>& weights);

// Length-adaptive variant for short answers: max order min(4, |candidate|),
// uniform weights over the used orders.
double short_form_bleu(const Tokens& candidate, const Tokens& reference);

double brevity_penalty(std::size_t candidate_len, std::size_t reference_len);

}  // namespace tirlab::reward
