// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/tax_code.hpp"

#include <cctype>

#include "taxcode/error.hpp"

namespace taxcode {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

std::string_view kind_name(CodeKind kind) {
  return kind == CodeKind::kHsn ? "HSN" : "SAC";
}

std::string_view kind_token_prefix(CodeKind kind) {
  return kind == CodeKind::kHsn ? "hsn" : "sac";
}

std::optional<CodeKind> parse_kind(std::string_view text) {
  std::string lowered;
  for (char c : text) {
    lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lowered == "hsn") return CodeKind::kHsn;
  if (lowered == "sac") return CodeKind::kSac;
  return std::nullopt;
}

std::string_view level_name(Level level) {
  switch (level) {
    case Level::kChapter: return "chapter";
    case Level::kHeading: return "heading";
    case Level::kSubHeading: return "sub_heading";
    case Level::kProductTariff: return "product_tariff";
  }
  return "unknown";
}

std::string_view level_tag(Level level) {
  switch (level) {
    case Level::kChapter: return "ch";
    case Level::kHeading: return "h";
    case Level::kSubHeading: return "sh";
    case Level::kProductTariff: return "pt";
  }
  return "?";
}

Level level_at(std::size_t index) {
  if (index >= kMaxDepth) {
    throw Error(ErrorCode::kInvalidArgument,
                "level index " + std::to_string(index) + " out of range");
  }
  return static_cast<Level>(index);
}

Segment::Segment(Level level, std::uint8_t value) : level_(level), value_(value) {
  if (value > 99) {
    throw Error(ErrorCode::kInvalidCode,
                "segment value " + std::to_string(value) + " exceeds two digits");
  }
}

Segment Segment::parse(Level level, std::string_view digits) {
  if (digits.size() != 2 || !is_digit(digits[0]) || !is_digit(digits[1])) {
    throw Error(ErrorCode::kInvalidCode,
                "segment '" + std::string(digits) + "' is not two digits");
  }
  return Segment(level, static_cast<std::uint8_t>((digits[0] - '0') * 10 + (digits[1] - '0')));
}

std::string Segment::digits() const {
  return {static_cast<char>('0' + value_ / 10), static_cast<char>('0' + value_ % 10)};
}

std::string digits_of(std::span<const Segment> segments) {
  std::string out;
  out.reserve(segments.size() * 2);
  for (const auto& s : segments) out += s.digits();
  return out;
}

TaxCode TaxCode::parse(CodeKind kind, std::string_view digits) {
  const std::size_t depth = depth_of(kind);
  if (digits.size() != depth * 2) {
    throw Error(ErrorCode::kInvalidCode,
                std::string(kind_name(kind)) + " code '" + std::string(digits) + "' must have " +
                    std::to_string(depth * 2) + " digits");
  }
  std::vector<Segment> segments;
  segments.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    segments.push_back(Segment::parse(level_at(i), digits.substr(i * 2, 2)));
  }
  return TaxCode(kind, std::move(segments));
}

TaxCode TaxCode::from_segments(CodeKind kind, std::vector<Segment> segments) {
  if (segments.size() != depth_of(kind)) {
    throw Error(ErrorCode::kInvalidCode,
                std::string(kind_name(kind)) + " code needs " +
                    std::to_string(depth_of(kind)) + " segments, got " +
                    std::to_string(segments.size()));
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].level() != level_at(i)) {
      throw Error(ErrorCode::kInvalidCode, "segments out of canonical level order");
    }
  }
  return TaxCode(kind, std::move(segments));
}

}  // namespace taxcode
