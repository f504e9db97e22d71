// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "taxcode/error.hpp"

namespace taxcode {

namespace {

// Descending probability, then ascending digit string. Prefixes at one level
// have equal length, so comparing segment values is comparing digit strings.
bool ranks_before(const Hypothesis& a, const Hypothesis& b) {
  if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
  return std::lexicographical_compare(
      a.prefix.begin(), a.prefix.end(), b.prefix.begin(), b.prefix.end(),
      [](const Segment& x, const Segment& y) { return x.value() < y.value(); });
}

}  // namespace

void BeamConfig::validate() const {
  if (width < 1) throw Error(ErrorCode::kInvalidArgument, "beam width must be >= 1");
  if (return_n < 1 || return_n > width) {
    throw Error(ErrorCode::kInvalidArgument, "return_n must lie in [1, width]");
  }
}

NormalizedWeights normalize_weights(std::span<const double> weights) {
  NormalizedWeights out;
  out.probabilities.resize(weights.size());
  const double max = weights.empty() ? 0.0 : *std::max_element(weights.begin(), weights.end());
  if (!(max > 0.0)) {
    out.fell_back = true;
    std::fill(out.probabilities.begin(), out.probabilities.end(),
              1.0 / static_cast<double>(weights.size()));
    return out;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out.probabilities[i] = weights[i] / max;
    sum += out.probabilities[i];
  }
  for (auto& p : out.probabilities) p /= sum;
  return out;
}

std::vector<Prediction> beam_search(const TaxonomyTrie& trie, const Scorer& scorer,
                                    std::string_view input_text, const BeamConfig& config) {
  config.validate();
  if (trie.leaf_count() == 0) throw Error(ErrorCode::kEmptyTaxonomy, "taxonomy is empty");

  std::vector<Hypothesis> beam(1);
  std::vector<Hypothesis> next;
  for (std::size_t depth = 0; depth < trie.depth(); ++depth) {
    const Level level = level_at(depth);
    next.clear();
    for (const Hypothesis& hyp : beam) {
      const auto candidates = trie.valid_candidates(hyp.prefix);
      const ScoreRequest request{input_text, trie.kind(), hyp.prefix, candidates};
      const ScoreResponse response = scorer.score(request);
      validate_response(request, response);
      const NormalizedWeights norm = normalize_weights(response.weights);

      for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double p = norm.probabilities[i];
        if (!(p > 0.0)) continue;
        Hypothesis expanded = hyp;
        expanded.prefix.push_back(candidates[i]);
        expanded.log_prob += std::log(p);
        expanded.steps.push_back({level, candidates[i], candidates.size(), p});
        if (norm.fell_back) ++expanded.fallback_events;
        next.push_back(std::move(expanded));
      }
    }
    const std::size_t keep = std::min(config.width, next.size());
    std::partial_sort(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(keep), next.end(),
                      ranks_before);
    next.resize(keep);
    std::swap(beam, next);
  }

  std::vector<Prediction> out;
  const std::size_t n = std::min(config.return_n, beam.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Hypothesis& h = beam[i];
    out.push_back(Prediction{TaxCode::from_segments(trie.kind(), std::move(h.prefix)),
                             std::exp(h.log_prob), std::move(h.steps), h.fallback_events});
  }
  return out;
}

Prediction predict(const TaxonomyTrie& trie, const Scorer& scorer, const CleanedText& cleaned,
                   const BeamConfig& config) {
  if (cleaned.rejected()) {
    throw Error(ErrorCode::kRejectedInput, "input was rejected during cleaning");
  }
  auto predictions = beam_search(trie, scorer, cleaned.text, config);
  return std::move(predictions.front());
}

}  // namespace taxcode
