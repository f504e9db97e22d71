// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "taxcode/error.hpp"
#include "taxcode/tax_code.hpp"

namespace taxcode {

// A prediction scored against an expert label. A missing prediction (the
// input was rejected before decoding) counts as a miss everywhere.
struct LabeledPair {
  std::optional<TaxCode> predicted;
  TaxCode gold;
  std::optional<std::chrono::year_month_day> date;
};

struct ClassificationScores {
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double exact_match = 0.0;
};

// Per-class precision, recall and F1 over full codes, macro-averaged over the
// classes present in the gold labels. Throws kEmptyInput.
ClassificationScores precision_recall_f1(std::span<const LabeledPair> pairs);

// Element i is the fraction of pairs whose first i + 1 segments all match.
// Throws kEmptyInput, kMixedKinds.
std::vector<double> per_level_accuracy(std::span<const LabeledPair> pairs);

/// Cohen's kappa, (p_o - p_e) / (1 - p_e) with p_e the sum over categories of
/// the product of both raters' marginal frequencies. Computed from integer
/// counts, so identical label streams give exactly 1.0; when both raters use
/// one and the same category (p_e == 1) the result is 1.0.
/// Throws kLengthMismatch, kEmptyInput.
template <typename Label>
double cohens_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "rater label lists differ in length");
  }
  if (a.empty()) throw Error(ErrorCode::kEmptyInput, "no labels");
  std::map<Label, std::pair<std::int64_t, std::int64_t>> marginals;
  std::int64_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  const auto n = static_cast<std::int64_t>(a.size());
  // kappa = (n * agree - sum m_a m_b) / (n^2 - sum m_a m_b)
  std::int64_t chance = 0;
  for (const auto& [label, m] : marginals) chance += m.first * m.second;
  const std::int64_t n2 = n * n;
  if (chance == n2) return 1.0;
  const std::int64_t numerator = n * agree - chance;
  return static_cast<double>(numerator) / static_cast<double>(n2 - chance);
}

struct MonthlyKappa {
  std::chrono::year_month month;
  std::size_t count = 0;
  // Absent when the month has fewer than two distinct gold labels.
  std::optional<double> kappa;

  bool degenerate() const { return !kappa.has_value(); }
};

// Kappa per calendar month of the pair dates, months ascending.
// Throws kMissingTimestamps if any pair has no date.
std::vector<MonthlyKappa> kappa_over_time(std::span<const LabeledPair> pairs);

// Label used for kappa: full code digits, or "<none>" for a missing prediction.
std::string kappa_label(const std::optional<TaxCode>& code);

struct EvalReport {
  std::size_t records = 0;
  ClassificationScores scores;
  std::vector<double> per_level_accuracy;
  double kappa = 0.0;
  // Present only when every pair carries a date.
  std::optional<std::vector<MonthlyKappa>> kappa_by_month;
};

// Throws kEmptyInput, kMixedKinds, kKindMismatch.
EvalReport evaluate(std::span<const LabeledPair> pairs);

std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);

// Parses "YYYY-MM-DD", optionally followed by a time part starting with 'T'
// or ' ' (ignored). Returns nullopt for anything else or an invalid date.
std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view text);

}  // namespace taxcode
