// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "taxcode/tax_code.hpp"
#include "taxcode/taxonomy.hpp"

namespace taxcode {

inline constexpr std::string_view kDashToken = "<DASH>";
inline constexpr std::string_view kUnkToken = "<UNK>";

enum class ReservedToken { kDash, kUnk };

// One vocabulary entry: either `<kind>_<level>_<dd>` (e.g. "hsn_ch_12") or a
// reserved placeholder. Reserved tokens are declared for external tokenizers
// and carry no decoding meaning.
class SpecialToken {
 public:
  static SpecialToken code(CodeKind kind, Segment segment);
  static SpecialToken reserved(ReservedToken which);

  // Throws kUnknownToken for anything that is neither a code token nor a
  // reserved token.
  static SpecialToken parse(std::string_view text);

  bool is_reserved() const noexcept { return std::holds_alternative<ReservedToken>(value_); }
  std::optional<ReservedToken> reserved_kind() const;

  // Precondition: !is_reserved().
  CodeKind kind() const;
  const Segment& segment() const;

  std::string render() const;

  friend bool operator==(const SpecialToken&, const SpecialToken&) = default;

 private:
  struct CodePart {
    CodeKind kind;
    Segment segment;
    friend bool operator==(const CodePart&, const CodePart&) = default;
  };

  explicit SpecialToken(std::variant<CodePart, ReservedToken> value) : value_(value) {}

  std::variant<CodePart, ReservedToken> value_;
};

using TokenSequence = std::vector<SpecialToken>;

// HSN 12345678 -> hsn_ch_12 hsn_h_34 hsn_sh_56 hsn_pt_78.
TokenSequence encode_code(const TaxCode& code);

// Concatenates the digit pairs back into a code. Errors:
//   kUnknownToken   reserved token in the sequence
//   kMixedKind      tokens disagree on hsn/sac
//   kBadLevelOrder  level tags out of order or with a gap
//   kWrongLength    too few or too many tokens for the kind
TaxCode decode_tokens(std::span<const SpecialToken> tokens);

// Parses each string first; unparseable strings raise kUnknownToken.
TaxCode decode_tokens(std::span<const std::string> tokens);

std::vector<std::string> render_tokens(std::span<const SpecialToken> tokens);

// Every (level, value) pair present in the trie as a code token, sorted by
// rendered text, followed by <DASH> and <UNK>.
std::vector<SpecialToken> emit_vocabulary(const TaxonomyTrie& trie);

}  // namespace taxcode
