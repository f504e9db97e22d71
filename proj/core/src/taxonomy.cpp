// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "csv_reader.hpp"
#include "taxcode/error.hpp"

namespace taxcode {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_blank_record(const std::vector<std::string>& fields) {
  return fields.size() == 1 && trim(fields[0]).empty();
}

std::string row_prefix(std::size_t line) { return "row " + std::to_string(line) + ": "; }

}  // namespace

TaxonomyTrie TaxonomyTrie::load(std::istream& in, CodeKind kind) {
  detail::CsvReader reader(in);
  std::vector<std::string> fields;

  bool have_header = false;
  while (reader.next(fields)) {
    if (is_blank_record(fields)) continue;
    if (fields.size() != 3 || lower(trim(fields[0])) != "kind" ||
        lower(trim(fields[1])) != "code" || lower(trim(fields[2])) != "description") {
      throw Error(ErrorCode::kMalformedRow,
                  row_prefix(reader.record_line()) + "expected header 'kind,code,description'");
    }
    have_header = true;
    break;
  }
  if (!have_header) throw Error(ErrorCode::kEmptyTaxonomy, "taxonomy has no rows");

  // code digits -> (description, line)
  std::map<std::string, std::pair<std::string, std::size_t>> rows;
  while (reader.next(fields)) {
    if (is_blank_record(fields)) continue;
    const std::size_t line = reader.record_line();
    if (fields.size() != 3) {
      throw Error(ErrorCode::kMalformedRow,
                  row_prefix(line) + "expected 3 fields, got " + std::to_string(fields.size()));
    }
    const auto row_kind = parse_kind(trim(fields[0]));
    if (!row_kind) {
      throw Error(ErrorCode::kMalformedRow,
                  row_prefix(line) + "unknown kind '" + trim(fields[0]) + "'");
    }
    if (*row_kind != kind) {
      throw Error(ErrorCode::kMalformedRow, row_prefix(line) + "kind " +
                                                std::string(kind_name(*row_kind)) +
                                                " in a " + std::string(kind_name(kind)) +
                                                " taxonomy");
    }
    std::string code = trim(fields[1]);
    try {
      (void)TaxCode::parse(kind, code);
    } catch (const Error& e) {
      throw Error(ErrorCode::kMalformedRow, row_prefix(line) + e.what());
    }
    auto [it, inserted] = rows.try_emplace(code, fields[2], line);
    if (!inserted && it->second.first != fields[2]) {
      throw Error(ErrorCode::kDuplicateLeaf,
                  row_prefix(line) + "code " + code + " already listed on row " +
                      std::to_string(it->second.second) + " with a different description");
    }
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyTaxonomy, "taxonomy has no data rows");

  std::vector<LeafEntry> leaves;
  leaves.reserve(rows.size());
  for (auto& [code, entry] : rows) {
    leaves.push_back({TaxCode::parse(kind, code), std::move(entry.first)});
  }
  return from_leaves(kind, leaves);
}

TaxonomyTrie TaxonomyTrie::from_leaves(CodeKind kind, std::span<const LeafEntry> leaves) {
  if (leaves.empty()) throw Error(ErrorCode::kEmptyTaxonomy, "taxonomy has no leaves");

  std::vector<const LeafEntry*> sorted;
  sorted.reserve(leaves.size());
  for (const auto& leaf : leaves) {
    if (leaf.code.kind() != kind) {
      throw Error(ErrorCode::kKindMismatch,
                  std::string(kind_name(leaf.code.kind())) + " code " + leaf.code.digits() +
                      " in a " + std::string(kind_name(kind)) + " taxonomy");
    }
    sorted.push_back(&leaf);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const LeafEntry* a, const LeafEntry* b) { return a->code < b->code; });

  TaxonomyTrie trie(kind);
  trie.nodes_.emplace_back();
  const LeafEntry* previous = nullptr;
  for (const LeafEntry* leaf : sorted) {
    if (previous && previous->code == leaf->code) {
      if (previous->description != leaf->description) {
        throw Error(ErrorCode::kDuplicateLeaf,
                    "code " + leaf->code.digits() + " listed with conflicting descriptions");
      }
      continue;
    }
    previous = leaf;
    // Leaves arrive in ascending order, so a shared prefix is always the
    // most recently appended child.
    std::uint32_t node = 0;
    for (const Segment& seg : leaf->code.segments()) {
      auto& children = trie.nodes_[node].children;
      if (!children.empty() && trie.nodes_[children.back()].value == seg.value()) {
        node = children.back();
        continue;
      }
      const auto id = static_cast<std::uint32_t>(trie.nodes_.size());
      trie.nodes_[node].children.push_back(id);
      trie.nodes_.push_back(Node{seg.value(), {}, {}});
      node = id;
    }
    trie.nodes_[node].description = leaf->description;
    ++trie.leaf_count_;
  }
  return trie;
}

TaxonomyTrie TaxonomyTrie::from_codes(CodeKind kind, std::span<const TaxCode> codes) {
  std::vector<LeafEntry> leaves;
  leaves.reserve(codes.size());
  for (const auto& c : codes) leaves.push_back({c, {}});
  return from_leaves(kind, leaves);
}

const TaxonomyTrie::Node* TaxonomyTrie::find(std::span<const Segment> path) const {
  if (path.size() > depth()) return nullptr;
  const Node* node = &nodes_[0];
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i].level() != level_at(i)) return nullptr;
    const auto value = path[i].value();
    auto it = std::lower_bound(
        node->children.begin(), node->children.end(), value,
        [this](std::uint32_t id, std::uint8_t v) { return nodes_[id].value < v; });
    if (it == node->children.end() || nodes_[*it].value != value) return nullptr;
    node = &nodes_[*it];
  }
  return node;
}

std::vector<Segment> TaxonomyTrie::valid_candidates(std::span<const Segment> prefix) const {
  const Node* node = find(prefix);
  if (node == nullptr) {
    throw Error(ErrorCode::kUnknownPrefix,
                "prefix '" + digits_of(prefix) + "' is not in the taxonomy");
  }
  std::vector<Segment> out;
  if (prefix.size() == depth()) return out;
  const Level level = level_at(prefix.size());
  out.reserve(node->children.size());
  for (auto id : node->children) out.emplace_back(level, nodes_[id].value);
  return out;
}

bool TaxonomyTrie::contains(const TaxCode& code) const {
  if (code.kind() != kind_) {
    throw Error(ErrorCode::kKindMismatch, std::string(kind_name(code.kind())) +
                                              " code queried against a " +
                                              std::string(kind_name(kind_)) + " taxonomy");
  }
  return find(code.segments()) != nullptr;
}

std::vector<TaxCode> TaxonomyTrie::leaves() const {
  std::vector<TaxCode> out;
  out.reserve(leaf_count_);
  std::vector<Segment> path;
  auto walk = [&](auto&& self, std::uint32_t id) -> void {
    const Node& node = nodes_[id];
    if (path.size() == depth()) {
      out.push_back(TaxCode::from_segments(kind_, path));
      return;
    }
    const Level level = level_at(path.size());
    for (auto child : node.children) {
      path.emplace_back(level, nodes_[child].value);
      self(self, child);
      path.pop_back();
    }
  };
  walk(walk, 0);
  return out;
}

std::optional<std::string_view> TaxonomyTrie::description(const TaxCode& code) const {
  if (code.kind() != kind_) return std::nullopt;
  const Node* node = find(code.segments());
  if (node == nullptr) return std::nullopt;
  return std::string_view(node->description);
}

std::vector<std::uint8_t> TaxonomyTrie::distinct_values(Level level) const {
  const std::size_t target = level_index(level);
  std::set<std::uint8_t> values;
  if (target >= depth()) return {};
  auto walk = [&](auto&& self, std::uint32_t id, std::size_t d) -> void {
    for (auto child : nodes_[id].children) {
      if (d == target) {
        values.insert(nodes_[child].value);
      } else {
        self(self, child, d + 1);
      }
    }
  };
  walk(walk, 0, 0);
  return {values.begin(), values.end()};
}

}  // namespace taxcode
