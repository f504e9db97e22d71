// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taxcode/tax_code.hpp"

namespace taxcode {

struct LeafEntry {
  TaxCode code;
  std::string description;
};

/// Immutable prefix tree whose root-to-leaf paths are exactly the legal
/// codes of one kind. Internal nodes are inferred from the leaf prefixes and
/// every node keeps its children sorted ascending by segment value.
///
/// Safe for concurrent reads once constructed.
class TaxonomyTrie {
 public:
  /// Reads the `kind,code,description` CSV format. Errors carry the 1-based
  /// line number of the offending record:
  ///   kMalformedRow   bad header, bad digit count, non-digit, kind mismatch
  ///   kDuplicateLeaf  same code listed with conflicting descriptions
  ///   kEmptyTaxonomy  no data rows
  static TaxonomyTrie load(std::istream& in, CodeKind kind);

  static TaxonomyTrie from_leaves(CodeKind kind, std::span<const LeafEntry> leaves);
  static TaxonomyTrie from_codes(CodeKind kind, std::span<const TaxCode> codes);

  CodeKind kind() const noexcept { return kind_; }
  std::size_t depth() const noexcept { return depth_of(kind_); }
  std::size_t leaf_count() const noexcept { return leaf_count_; }

  /// Children of the node addressed by `prefix`, ascending by value. Empty
  /// only when `prefix` is a complete code. Throws kUnknownPrefix when the
  /// prefix is not a path in the trie.
  std::vector<Segment> valid_candidates(std::span<const Segment> prefix) const;

  /// Throws kKindMismatch when `code` is of a different kind.
  bool contains(const TaxCode& code) const;

  /// All leaf codes in ascending order.
  std::vector<TaxCode> leaves() const;

  /// Leaf description, or nullopt if the code is absent. May be empty.
  std::optional<std::string_view> description(const TaxCode& code) const;

  /// Distinct segment values occurring at `level`, ascending.
  std::vector<std::uint8_t> distinct_values(Level level) const;

 private:
  struct Node {
    std::uint8_t value = 0;
    std::vector<std::uint32_t> children;
    std::string description;
  };

  explicit TaxonomyTrie(CodeKind kind) : kind_(kind) {}

  const Node* find(std::span<const Segment> path) const;

  CodeKind kind_;
  std::vector<Node> nodes_;  // nodes_[0] is the root
  std::size_t leaf_count_ = 0;
};

}  // namespace taxcode
