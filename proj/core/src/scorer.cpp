// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>

#include "json.hpp"
#include "taxcode/error.hpp"
#include "taxcode/similarity.hpp"

namespace taxcode {

bool ScoreResponse::degenerate() const {
  return std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; });
}

void validate_response(const ScoreRequest& request, const ScoreResponse& response) {
  if (response.weights.size() != request.candidates.size()) {
    throw Error(ErrorCode::kProtocolError,
                "expected " + std::to_string(request.candidates.size()) + " weights, got " +
                    std::to_string(response.weights.size()));
  }
  for (double w : response.weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kProtocolError, "weight " + std::to_string(w) +
                                                 " is not a finite non-negative number");
    }
  }
}

ScoreResponse UniformScorer::score(const ScoreRequest& request) const {
  return {std::vector<double>(request.candidates.size(), 1.0)};
}

void TableScorer::set(std::span<const Segment> prefix, const Segment& candidate, double weight) {
  set(digits_of(prefix) + candidate.digits(), weight);
}

void TableScorer::set(std::string_view path_digits, double weight) {
  if (!std::isfinite(weight) || weight < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "table weight must be finite and non-negative");
  }
  if (path_digits.empty() || path_digits.size() % 2 != 0 || path_digits.size() > 2 * kMaxDepth ||
      !std::all_of(path_digits.begin(), path_digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(ErrorCode::kInvalidArgument, "bad table path '" + std::string(path_digits) + "'");
  }
  if (!table_.emplace(std::string(path_digits), weight).second) {
    throw Error(ErrorCode::kInvalidArgument,
                "duplicate table entry for path " + std::string(path_digits));
  }
}

double TableScorer::weight(std::span<const Segment> prefix, const Segment& candidate) const {
  const auto it = table_.find(digits_of(prefix) + candidate.digits());
  return it == table_.end() ? 0.0 : it->second;
}

TableScorer TableScorer::load(std::istream& in) {
  TableScorer table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    const std::string where = "table line " + std::to_string(line_no) + ": ";
    try {
      const auto row = nlohmann::json::parse(line);
      std::string path;
      for (const auto& p : row.at("prefix")) path += p.get<std::string>();
      path += row.at("candidate").get<std::string>();
      table.set(path, row.at("weight").get<double>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedInput, where + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedInput, where + e.what());
    }
  }
  return table;
}

ScoreResponse TableScorer::score(const ScoreRequest& request) const {
  ScoreResponse response;
  response.weights.reserve(request.candidates.size());
  const std::string prefix = digits_of(request.prefix);
  for (const auto& c : request.candidates) {
    const auto it = table_.find(prefix + c.digits());
    response.weights.push_back(it == table_.end() ? 0.0 : it->second);
  }
  return response;
}

SimilarityScorer SimilarityScorer::fit(std::vector<TrainingExample> examples,
                                       std::size_t k_neighbors) {
  if (examples.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "no training examples");
  if (k_neighbors == 0) throw Error(ErrorCode::kInvalidArgument, "k_neighbors must be >= 1");
  const CodeKind kind = examples.front().code.kind();
  for (const auto& e : examples) {
    if (e.code.kind() != kind) {
      throw Error(ErrorCode::kMixedKinds, "training set mixes HSN and SAC codes");
    }
  }
  return SimilarityScorer(std::move(examples), k_neighbors, kind);
}

ScoreResponse SimilarityScorer::score(const ScoreRequest& request) const {
  std::vector<double> sims(examples_.size());
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    sims[i] = similarity(request.input_text, examples_[i].description);
  }
  std::vector<std::size_t> order(examples_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sims[a] > sims[b]; });
  std::size_t keep = std::min(k_, order.size());
  const double cutoff = sims[order[keep - 1]];
  while (keep < order.size() && sims[order[keep]] == cutoff) ++keep;

  std::vector<double> weights(request.candidates.size(), 0.0);
  bool any_extends = false;
  const std::size_t depth = request.prefix.size();
  for (std::size_t r = 0; r < keep; ++r) {
    const TrainingExample& ex = examples_[order[r]];
    const auto segments = ex.code.segments();
    if (ex.code.kind() != request.kind || depth >= segments.size() ||
        !std::equal(request.prefix.begin(), request.prefix.end(), segments.begin())) {
      continue;
    }
    any_extends = true;
    const Segment& next = segments[depth];
    for (std::size_t c = 0; c < request.candidates.size(); ++c) {
      if (request.candidates[c] == next) weights[c] += sims[order[r]];
    }
  }
  if (!any_extends) std::fill(weights.begin(), weights.end(), 1.0);
  return {std::move(weights)};
}

}  // namespace taxcode
