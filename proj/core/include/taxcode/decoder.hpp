// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "taxcode/scorer.hpp"
#include "taxcode/tax_code.hpp"
#include "taxcode/taxonomy.hpp"
#include "taxcode/textprep.hpp"

namespace taxcode {

struct BeamConfig {
  std::size_t width = 5;
  std::size_t return_n = 1;

  // Throws kInvalidArgument unless 1 <= return_n <= width.
  void validate() const;
};

// One decoding level along a hypothesis.
struct TraceStep {
  Level level;
  Segment segment;
  std::size_t candidate_count;
  double probability;  // normalized over the candidate set, in (0, 1]
};

struct Hypothesis {
  std::vector<Segment> prefix;
  double log_prob = 0.0;
  std::vector<TraceStep> steps;
  std::size_t fallback_events = 0;
};

struct Prediction {
  TaxCode code;
  double probability;
  std::vector<TraceStep> trace;
  // Levels on this path where the scorer returned all-zero weights and the
  // uniform distribution was used instead.
  std::size_t fallback_events;
};

struct NormalizedWeights {
  std::vector<double> probabilities;
  bool fell_back = false;
};

// Divides by the sum (after scaling by the maximum). All-zero input yields a
// uniform distribution with fell_back set.
NormalizedWeights normalize_weights(std::span<const double> weights);

/// Hierarchical constrained beam search.
///
/// Starts from one empty hypothesis with probability 1. At each level every
/// hypothesis is expanded over the trie children of its prefix, weighted by
/// the scorer and normalized over that candidate set; expansions are ranked by
/// probability (descending, ties by ascending digit string) and the best
/// `width` survive. Zero-probability expansions are dropped. Returns up to
/// `return_n` complete predictions, best first.
///
/// Scorer failures (kScorerUnavailable, kProtocolError, kTimeout) propagate.
std::vector<Prediction> beam_search(const TaxonomyTrie& trie, const Scorer& scorer,
                                    std::string_view input_text, const BeamConfig& config);

// Best prediction for cleaned text. Throws kRejectedInput for rejected text.
Prediction predict(const TaxonomyTrie& trie, const Scorer& scorer, const CleanedText& cleaned,
                   const BeamConfig& config);

}  // namespace taxcode
