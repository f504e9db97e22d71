// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string_view>

namespace taxcode {

// Length of the longest common subsequence, computed bytewise with the
// bit-parallel recurrence (64 characters of `a` per machine word).
std::size_t lcs_length(std::string_view a, std::string_view b);

// Edit distance with insertions and deletions only:
// |a| + |b| - 2 * lcs(a, b).
std::size_t indel_distance(std::string_view a, std::string_view b);

// 1 - indel_distance / (|a| + |b|); 1 when both strings are empty.
double similarity(std::string_view a, std::string_view b);

}  // namespace taxcode
