// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace taxcode {

inline constexpr std::string_view kBrandToken = "<brand>";

// Tokens dropped when no explicit noise patterns are configured: tokens that
// mix letters and digits inside one run (serial numbers), tokens made only of
// punctuation, and bare digit runs of five or more.
std::vector<std::string> default_noise_patterns();

/// Rules for the cleaning pipeline.
///
/// Noise patterns are ECMAScript regular expressions matched case-insensitively
/// against whole tokens. Variants map to a canonical form; each variant may be
/// a multi-word phrase and must appear under exactly one canonical form.
class CleanConfig {
 public:
  struct Options {
    std::optional<std::vector<std::string>> noise_patterns;  // nullopt: defaults
    std::map<std::string, std::vector<std::string>> variant_map;
    std::set<std::string> brands;
    std::size_t min_informative_tokens = 1;
  };

  // Throws kInvalidArgument when a pattern fails to compile, a variant list is
  // empty, a variant repeats, a variant is itself a canonical form, or
  // min_informative_tokens is zero.
  explicit CleanConfig(Options options);

  static CleanConfig defaults() { return CleanConfig(Options{}); }

  const std::vector<std::string>& noise_patterns() const { return patterns_; }
  const std::map<std::string, std::vector<std::string>>& variant_map() const {
    return options_.variant_map;
  }
  std::size_t min_informative_tokens() const { return options_.min_informative_tokens; }

  bool is_noise(std::string_view token) const;
  bool is_brand(std::string_view token) const;

  // Lemma used for matching and output. Brand tokens and tokens of canonical
  // forms are protected and returned unchanged.
  std::string lemma(std::string_view token) const;

  struct Variant {
    std::vector<std::string> keys;       // lemmatized variant tokens
    std::vector<std::string> canonical;  // canonical tokens
  };
  // Longest variant (by normalized character length) first.
  const std::vector<Variant>& variants() const { return variants_; }

 private:
  Options options_;
  std::vector<std::string> patterns_;
  std::vector<std::regex> compiled_;
  std::set<std::string> brands_lower_;
  std::set<std::string> protected_;
  std::vector<Variant> variants_;
};

// Reads the JSON config file: {"noise_patterns": [...], "variant_map": {...},
// "brands": [...], "min_informative_tokens": n}. Every key is optional.
CleanConfig load_clean_config(std::istream& in);

enum class RejectionReason { kIncomplete, kEmpty };

std::string_view rejection_reason_name(RejectionReason reason);  // "incomplete" / "empty"

struct CleanedText {
  std::string text;
  std::optional<RejectionReason> rejection;

  bool rejected() const noexcept { return rejection.has_value(); }
};

struct CatalogEntry {
  std::string canonical_description;
  std::vector<std::string> category_tags;
};

// Reads the JSON catalog file: [{"description": "...", "tags": [...]}, ...].
std::vector<CatalogEntry> load_catalog(std::istream& in);

std::vector<std::string> split_whitespace(std::string_view text);
std::string join_tokens(std::span<const std::string> tokens);

// Suffix stripping (-ing, -ed, sibilant -es, -s) repeated until no rule
// applies. A rule fires only if at least four letters remain; tokens that are
// not purely lowercase ASCII letters are returned unchanged.
std::string strip_suffixes(std::string_view token);

// Repeatedly removes the second copy of the longest immediately repeated
// token run (leftmost first) until no adjacent repeat remains.
std::vector<std::string> dedup_repeats(std::vector<std::string> tokens);

std::vector<std::string> strip_noise(std::span<const std::string> tokens,
                                     const CleanConfig& config);

// Lowercases, collapses whitespace, rewrites variant phrases to their
// canonical form and lemmatizes.
std::string normalize_variants(std::string_view text, const CleanConfig& config);

std::vector<std::string> mask_brands(std::span<const std::string> tokens,
                                     const CleanConfig& config);

// normalize_variants -> tokenize -> strip_noise -> mask_brands ->
// dedup_repeats, repeated until the text is stable.
CleanedText clean(std::string_view description, const CleanConfig& config);

// Appends the best-matching catalog description and tags when their
// similarity reaches `threshold`. Throws kRejectedInput for rejected input.
CleanedText enrich(const CleanedText& cleaned, std::span<const CatalogEntry> catalog,
                   double threshold);

}  // namespace taxcode
