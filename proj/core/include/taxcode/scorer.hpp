// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taxcode/tax_code.hpp"

namespace taxcode {

// One decoding step: weigh `candidates` as the next segment after `prefix`
// given the cleaned description. All candidates sit at the level following
// the prefix.
struct ScoreRequest {
  std::string_view input_text;
  CodeKind kind = CodeKind::kHsn;
  std::span<const Segment> prefix;
  std::span<const Segment> candidates;
};

// Unnormalized non-negative weights aligned with the request candidates.
struct ScoreResponse {
  std::vector<double> weights;

  // True when every weight is zero; the decoder then falls back to uniform.
  bool degenerate() const;
};

// Throws kProtocolError unless the response has one finite, non-negative
// weight per candidate.
void validate_response(const ScoreRequest& request, const ScoreResponse& response);

/// Conditional weight provider P(candidate | text, prefix).
///
/// Implementations must be safe to call from several threads at once, either
/// because they are immutable or because they serialize internally. The
/// decoder normalizes weights per candidate set, so only ratios matter.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual ScoreResponse score(const ScoreRequest& request) const = 0;

  // False when calls are serialized internally and parallel decoding gains
  // nothing.
  virtual bool parallel_friendly() const { return true; }
};

class UniformScorer final : public Scorer {
 public:
  ScoreResponse score(const ScoreRequest& request) const override;
};

// Weights looked up by full path digits (prefix followed by candidate).
// Paths missing from the table weigh zero.
class TableScorer final : public Scorer {
 public:
  // Throws kInvalidArgument for negative or non-finite weights and for a
  // path that is already present.
  void set(std::span<const Segment> prefix, const Segment& candidate, double weight);
  void set(std::string_view path_digits, double weight);

  double weight(std::span<const Segment> prefix, const Segment& candidate) const;

  // JSON lines of {"prefix": ["84"], "candidate": "71", "weight": 1.0}.
  // Errors report the 1-based line number as kMalformedInput.
  static TableScorer load(std::istream& in);

  ScoreResponse score(const ScoreRequest& request) const override;

  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::string, double, std::less<>> table_;
};

struct TrainingExample {
  std::string description;
  TaxCode code;
};

/// k-nearest-neighbour scorer over labelled descriptions.
///
/// For each request the `k` training descriptions most similar to the input
/// are selected (every neighbour tied with the k-th is kept as well). Among
/// those whose code extends the prefix, each candidate collects the summed
/// similarity of neighbours continuing with it. If no neighbour extends the
/// prefix the weights are uniform.
class SimilarityScorer final : public Scorer {
 public:
  // Throws kEmptyTrainingSet, kMixedKinds, or kInvalidArgument (k == 0).
  static SimilarityScorer fit(std::vector<TrainingExample> examples, std::size_t k_neighbors);

  ScoreResponse score(const ScoreRequest& request) const override;

  std::size_t k_neighbors() const { return k_; }
  CodeKind kind() const { return kind_; }

 private:
  SimilarityScorer(std::vector<TrainingExample> examples, std::size_t k, CodeKind kind)
      : examples_(std::move(examples)), k_(k), kind_(kind) {}

  std::vector<TrainingExample> examples_;
  std::size_t k_;
  CodeKind kind_;
};

}  // namespace taxcode
