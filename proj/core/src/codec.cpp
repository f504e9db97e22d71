// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/codec.hpp"

#include <algorithm>
#include <array>

#include "taxcode/error.hpp"

namespace taxcode {

namespace {

constexpr std::array<Level, kMaxDepth> kLevels = {Level::kChapter, Level::kHeading,
                                                  Level::kSubHeading, Level::kProductTariff};

std::optional<Level> parse_level_tag(std::string_view tag) {
  for (Level level : kLevels) {
    if (level_tag(level) == tag) return level;
  }
  return std::nullopt;
}

}  // namespace

SpecialToken SpecialToken::code(CodeKind kind, Segment segment) {
  return SpecialToken(CodePart{kind, segment});
}

SpecialToken SpecialToken::reserved(ReservedToken which) { return SpecialToken(which); }

SpecialToken SpecialToken::parse(std::string_view text) {
  if (text == kDashToken) return reserved(ReservedToken::kDash);
  if (text == kUnkToken) return reserved(ReservedToken::kUnk);

  auto unknown = [&] {
    return Error(ErrorCode::kUnknownToken, "'" + std::string(text) + "' is not a code token");
  };
  // <kind>_<tag>_<dd>
  const auto first = text.find('_');
  const auto last = text.rfind('_');
  if (first == std::string_view::npos || first == last) throw unknown();
  const auto kind_text = text.substr(0, first);
  const auto tag = text.substr(first + 1, last - first - 1);
  const auto digits = text.substr(last + 1);

  std::optional<CodeKind> kind;
  if (kind_text == "hsn") kind = CodeKind::kHsn;
  if (kind_text == "sac") kind = CodeKind::kSac;
  const auto level = parse_level_tag(tag);
  if (!kind || !level) throw unknown();
  try {
    return code(*kind, Segment::parse(*level, digits));
  } catch (const Error&) {
    throw unknown();
  }
}

std::optional<ReservedToken> SpecialToken::reserved_kind() const {
  if (const auto* r = std::get_if<ReservedToken>(&value_)) return *r;
  return std::nullopt;
}

CodeKind SpecialToken::kind() const { return std::get<CodePart>(value_).kind; }

const Segment& SpecialToken::segment() const { return std::get<CodePart>(value_).segment; }

std::string SpecialToken::render() const {
  if (const auto* r = std::get_if<ReservedToken>(&value_)) {
    return std::string(*r == ReservedToken::kDash ? kDashToken : kUnkToken);
  }
  const auto& part = std::get<CodePart>(value_);
  std::string out(kind_token_prefix(part.kind));
  out += '_';
  out += level_tag(part.segment.level());
  out += '_';
  out += part.segment.digits();
  return out;
}

TokenSequence encode_code(const TaxCode& code) {
  TokenSequence out;
  out.reserve(code.segments().size());
  for (const Segment& s : code.segments()) out.push_back(SpecialToken::code(code.kind(), s));
  return out;
}

TaxCode decode_tokens(std::span<const SpecialToken> tokens) {
  if (tokens.empty()) throw Error(ErrorCode::kWrongLength, "empty token sequence");
  std::optional<CodeKind> kind;
  std::vector<Segment> segments;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const SpecialToken& token = tokens[i];
    if (token.is_reserved()) {
      throw Error(ErrorCode::kUnknownToken,
                  "reserved token " + token.render() + " at position " + std::to_string(i));
    }
    if (!kind) kind = token.kind();
    if (token.kind() != *kind) {
      throw Error(ErrorCode::kMixedKind, "token " + token.render() + " in a " +
                                             std::string(kind_token_prefix(*kind)) + " sequence");
    }
    if (i >= depth_of(*kind)) {
      throw Error(ErrorCode::kWrongLength, std::string(kind_name(*kind)) + " sequence longer than " +
                                               std::to_string(depth_of(*kind)) + " tokens");
    }
    if (token.segment().level() != level_at(i)) {
      throw Error(ErrorCode::kBadLevelOrder,
                  "expected level '" + std::string(level_tag(level_at(i))) + "' at position " +
                      std::to_string(i) + ", got " + token.render());
    }
    segments.push_back(token.segment());
  }
  if (segments.size() != depth_of(*kind)) {
    throw Error(ErrorCode::kWrongLength, std::string(kind_name(*kind)) + " sequence has " +
                                             std::to_string(segments.size()) + " tokens, needs " +
                                             std::to_string(depth_of(*kind)));
  }
  return TaxCode::from_segments(*kind, std::move(segments));
}

TaxCode decode_tokens(std::span<const std::string> tokens) {
  TokenSequence parsed;
  parsed.reserve(tokens.size());
  for (const auto& t : tokens) parsed.push_back(SpecialToken::parse(t));
  return decode_tokens(std::span<const SpecialToken>(parsed));
}

std::vector<std::string> render_tokens(std::span<const SpecialToken> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.render());
  return out;
}

std::vector<SpecialToken> emit_vocabulary(const TaxonomyTrie& trie) {
  std::vector<std::pair<std::string, SpecialToken>> entries;
  for (std::size_t i = 0; i < trie.depth(); ++i) {
    const Level level = level_at(i);
    for (auto value : trie.distinct_values(level)) {
      auto token = SpecialToken::code(trie.kind(), Segment(level, value));
      entries.emplace_back(token.render(), token);
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<SpecialToken> out;
  out.reserve(entries.size() + 2);
  for (auto& e : entries) out.push_back(e.second);
  out.push_back(SpecialToken::reserved(ReservedToken::kDash));
  out.push_back(SpecialToken::reserved(ReservedToken::kUnk));
  return out;
}

}  // namespace taxcode
