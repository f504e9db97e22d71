// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/similarity.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

namespace taxcode {

namespace {

constexpr std::size_t kWordBits = 64;

// Single word fast path, |a| <= 64.
std::size_t lcs_single_word(std::string_view a, std::string_view b) {
  std::array<std::uint64_t, 256> match{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    match[static_cast<unsigned char>(a[i])] |= std::uint64_t{1} << i;
  }
  std::uint64_t s = ~std::uint64_t{0};
  for (char c : b) {
    const std::uint64_t m = match[static_cast<unsigned char>(c)];
    const std::uint64_t u = s & m;
    s = (s + u) | (s - u);
  }
  const std::uint64_t mask =
      a.size() == kWordBits ? ~std::uint64_t{0} : (std::uint64_t{1} << a.size()) - 1;
  return static_cast<std::size_t>(std::popcount(~s & mask));
}

std::size_t lcs_blocked(std::string_view a, std::string_view b) {
  const std::size_t words = (a.size() + kWordBits - 1) / kWordBits;
  std::vector<std::uint64_t> match(256 * words, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    match[static_cast<unsigned char>(a[i]) * words + i / kWordBits] |= std::uint64_t{1}
                                                                      << (i % kWordBits);
  }
  std::vector<std::uint64_t> s(words, ~std::uint64_t{0});
  for (char c : b) {
    const std::uint64_t* m = &match[static_cast<unsigned char>(c) * words];
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t u = s[w] & m[w];
      // (s + u) with carry propagation across words; (s - u) == s & ~m.
      const std::uint64_t sum = s[w] + u;
      const std::uint64_t with_carry = sum + carry;
      carry = (sum < s[w]) || (with_carry < sum) ? 1 : 0;
      s[w] = with_carry | (s[w] & ~m[w]);
    }
  }
  std::size_t lcs = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t bits = ~s[w];
    const std::size_t used = a.size() - w * kWordBits;
    if (used < kWordBits) bits &= (std::uint64_t{1} << used) - 1;
    lcs += static_cast<std::size_t>(std::popcount(bits));
  }
  return lcs;
}

}  // namespace

std::size_t lcs_length(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;
  // Bit vectors index the shorter string.
  if (b.size() <= kWordBits) return lcs_single_word(b, a);
  return lcs_blocked(b, a);
}

std::size_t indel_distance(std::string_view a, std::string_view b) {
  return a.size() + b.size() - 2 * lcs_length(a, b);
}

double similarity(std::string_view a, std::string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return 1.0 - static_cast<double>(indel_distance(a, b)) / static_cast<double>(total);
}

}  // namespace taxcode
