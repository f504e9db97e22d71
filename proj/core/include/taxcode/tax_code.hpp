// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace taxcode {

// HSN codes classify goods (8 digits), SAC codes classify services (6 digits).
enum class CodeKind : std::uint8_t { kHsn, kSac };

enum class Level : std::uint8_t {
  kChapter,
  kHeading,
  kSubHeading,
  kProductTariff,
};

inline constexpr std::size_t kMaxDepth = 4;

constexpr std::size_t depth_of(CodeKind kind) {
  return kind == CodeKind::kHsn ? 4 : 3;
}

std::string_view kind_name(CodeKind kind);          // "HSN" / "SAC"
std::string_view kind_token_prefix(CodeKind kind);  // "hsn" / "sac"
std::optional<CodeKind> parse_kind(std::string_view text);  // case-insensitive

std::string_view level_name(Level level);  // "chapter", "heading", ...
std::string_view level_tag(Level level);   // "ch", "h", "sh", "pt"

// Level of the segment at position `index` in a code.
Level level_at(std::size_t index);

constexpr std::size_t level_index(Level level) {
  return static_cast<std::size_t>(level);
}

// A two-digit slice of a code at a fixed level of the hierarchy.
class Segment {
 public:
  Segment(Level level, std::uint8_t value);

  // `digits` must be exactly two ASCII digits.
  static Segment parse(Level level, std::string_view digits);

  Level level() const noexcept { return level_; }
  std::uint8_t value() const noexcept { return value_; }
  std::string digits() const;

  friend bool operator==(const Segment&, const Segment&) = default;
  friend auto operator<=>(const Segment&, const Segment&) = default;

 private:
  Level level_;
  std::uint8_t value_;
};

std::string digits_of(std::span<const Segment> segments);

class TaxCode {
 public:
  // Throws kInvalidCode unless `digits` has exactly 2 * depth_of(kind) digits.
  static TaxCode parse(CodeKind kind, std::string_view digits);

  // Throws kInvalidCode unless the segments form a complete code of `kind`
  // in canonical level order.
  static TaxCode from_segments(CodeKind kind, std::vector<Segment> segments);

  CodeKind kind() const noexcept { return kind_; }
  std::span<const Segment> segments() const noexcept { return segments_; }
  std::string digits() const { return digits_of(segments_); }

  friend bool operator==(const TaxCode&, const TaxCode&) = default;
  friend auto operator<=>(const TaxCode&, const TaxCode&) = default;

 private:
  TaxCode(CodeKind kind, std::vector<Segment> segments)
      : kind_(kind), segments_(std::move(segments)) {}

  CodeKind kind_;
  std::vector<Segment> segments_;
};

}  // namespace taxcode
