// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "taxcode/similarity.hpp"

namespace {

std::string random_text(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> c('a', 'z');
  std::string s(n, ' ');
  for (auto& ch : s) ch = static_cast<char>(c(rng));
  return s;
}

void BM_Similarity(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::string a = random_text(rng, n), b = random_text(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(taxcode::similarity(a, b));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 2 * state.range(0));
}
BENCHMARK(BM_Similarity)->Arg(16)->Arg(64)->Arg(256)->Arg(1024);

}  // namespace
