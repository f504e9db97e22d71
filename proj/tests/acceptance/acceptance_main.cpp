// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
// the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli_harness.hpp"
#include "generators.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "taxcode/codec.hpp"
#include "taxcode/decoder.hpp"
#include "taxcode/metrics.hpp"
#include "taxcode/similarity.hpp"
#include "taxcode/textprep.hpp"

namespace taxcode::acceptance {
namespace {

using testing::Rng;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and limits.
constexpr std::uint64_t kSeed = 42;
constexpr double kOracleProbabilityTolerance = 1e-12;
constexpr double kTraceProductTolerance = 1e-9;
constexpr double kMonotonicityTolerance = 1e-12;
constexpr double kKappaFixtureTolerance = 1e-9;
constexpr double kKappaFixtureExpected = 0.193939;
constexpr double kRandomKappaBound = 0.05;
constexpr double kLaptopSimilarityTolerance = 1e-12;
constexpr double kOracleSeconds = 10.0;
constexpr double kFuzzSeconds = 30.0;
constexpr double kSelfPredictionSeconds = 5.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// 1. Beam search at full width agrees with exhaustive enumeration.
Outcome beam_vs_exhaustive() {
  Rng rng(kSeed);
  constexpr int kInstances = 500;
  const auto start = Clock::now();
  int mismatches = 0;
  double worst = 0.0;
  for (int i = 0; i < kInstances; ++i) {
    const TaxonomyTrie trie = testing::random_trie(rng, testing::random_kind(rng), 4, 4);
    const TableScorer table = testing::random_table(rng, trie);
    const auto oracle = testing::exhaustive_argmax(trie, table, "");
    const auto best = beam_search(trie, table, "", {trie.leaf_count(), 1}).front();
    const double diff = std::abs(best.probability - oracle.probability);
    worst = std::max(worst, diff);
    if (best.code.digits() != oracle.digits || diff > kOracleProbabilityTolerance) ++mismatches;
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < kOracleSeconds,
          fmt("%d instances, %d mismatches, max |dp| %.3g, %.2fs", kInstances, mismatches, worst,
              elapsed)};
}

// 2. Random weights never yield invalid codes or inconsistent traces.
Outcome validity_fuzz() {
  Rng rng(kSeed);
  constexpr int kDecodes = 10000;
  const auto start = Clock::now();
  int invalid = 0, violations = 0;
  for (int i = 0; i < kDecodes; ++i) {
    const TaxonomyTrie trie = testing::random_trie(rng, testing::random_kind(rng), 4, 4);
    const TableScorer table = testing::sparse_table(rng, trie, 0.25);
    const std::size_t width = testing::uniform_index(rng, 1, 8);
    for (const auto& p : beam_search(trie, table, "", {width, width})) {
      if (!trie.contains(p.code)) ++invalid;
      double product = 1.0;
      for (const auto& step : p.trace) product *= step.probability;
      if (std::abs(product - p.probability) > kTraceProductTolerance ||
          p.trace.size() != trie.depth()) {
        ++violations;
      }
    }
  }
  const double elapsed = seconds_since(start);
  return {invalid == 0 && violations == 0 && elapsed < kFuzzSeconds,
          fmt("%d decodes, %d invalid codes, %d trace violations, %.2fs", kDecodes, invalid,
              violations, elapsed)};
}

// 3. Top probability does not decrease as the beam widens.
Outcome monotonicity() {
  Rng rng(kSeed);
  constexpr int kInstances = 100;
  int bad_instances = 0;
  std::string first;
  for (int i = 0; i < kInstances; ++i) {
    const TaxonomyTrie trie = testing::random_trie(rng, testing::random_kind(rng), 4, 4);
    const TableScorer table = testing::random_table(rng, trie);
    double previous = 0.0;
    bool bad = false;
    for (std::size_t k = 1; k <= trie.leaf_count(); ++k) {
      const double p = beam_search(trie, table, "", {k, 1}).front().probability;
      if (p < previous - kMonotonicityTolerance && !bad) {
        bad = true;
        if (first.empty()) {
          first = fmt("; first drop: instance %d, width %zu: %.6f -> %.6f", i, k, previous, p);
        }
      }
      previous = std::max(previous, p);
    }
    if (bad) ++bad_instances;
  }
  return {bad_instances == 0,
          fmt("%d instances, %d with a drop", kInstances, bad_instances) + first};
}

// 4. Codec round-trip on a 1000-leaf trie and vocabulary re-parsing.
Outcome codec_round_trip() {
  Rng rng(kSeed);
  std::set<std::string> digits;
  while (digits.size() < 1000) {
    std::string d(8, '0');
    for (auto& c : d) c = static_cast<char>('0' + testing::uniform_index(rng, 0, 9));
    digits.insert(d);
  }
  std::vector<TaxCode> codes;
  for (const auto& d : digits) codes.push_back(TaxCode::parse(CodeKind::kHsn, d));
  const TaxonomyTrie trie = TaxonomyTrie::from_codes(CodeKind::kHsn, codes);
  int failures = 0;
  for (const TaxCode& leaf : trie.leaves()) {
    const auto tokens = encode_code(leaf);
    if (decode_tokens(std::span<const SpecialToken>(tokens)) != leaf) ++failures;
  }
  const auto vocab = emit_vocabulary(trie);
  int vocab_failures = 0;
  for (const auto& t : vocab) {
    try {
      if (SpecialToken::parse(t.render()) != t) ++vocab_failures;
    } catch (const Error&) {
      ++vocab_failures;
    }
  }
  return {trie.leaf_count() == 1000 && failures == 0 && vocab_failures == 0,
          fmt("%zu leaves, %d round-trip failures, %zu tokens, %d re-parse failures",
              trie.leaf_count(), failures, vocab.size(), vocab_failures)};
}

// 5. The published decomposition of 12345678.
Outcome decomposition_example() {
  const auto rendered = render_tokens(encode_code(TaxCode::parse(CodeKind::kHsn, "12345678")));
  const std::vector<std::string> expected = {"hsn_ch_12", "hsn_h_34", "hsn_sh_56", "hsn_pt_78"};
  std::string joined;
  for (const auto& t : rendered) joined += (joined.empty() ? "" : " ") + t;
  return {rendered == expected, joined};
}

// 6. Kappa identities.
Outcome kappa_identities() {
  Rng rng(kSeed);
  std::uniform_int_distribution<int> label(0, 9);
  std::vector<int> a(1000);
  for (auto& x : a) x = label(rng);
  const double self = cohens_kappa<int>(a, a);

  std::vector<std::string> ra, rb;
  auto add = [&](const char* x, const char* y, int n) {
    for (int i = 0; i < n; ++i) {
      ra.push_back(x);
      rb.push_back(y);
    }
  };
  add("A", "A", 40);
  add("B", "B", 30);
  add("A", "B", 15);
  add("B", "A", 15);
  const double fixture = cohens_kappa<std::string>(ra, rb);

  constexpr std::size_t kStream = 100000;
  std::vector<int> x(kStream), y(kStream);
  for (auto& v : x) v = label(rng);
  for (auto& v : y) v = label(rng);
  const double random = cohens_kappa<int>(x, y);

  const bool self_ok = self == 1.0;
  const bool fixture_ok = std::abs(fixture - kKappaFixtureExpected) <= kKappaFixtureTolerance;
  const bool random_ok = std::abs(random) < kRandomKappaBound;
  return {self_ok && fixture_ok && random_ok,
          fmt("k(a,a)=%.17g [%s]; 2x2 fixture k=%.9f vs expected %.6f [%s]; random k=%.5f [%s]",
              self, self_ok ? "ok" : "bad", fixture, kKappaFixtureExpected,
              fixture_ok ? "ok" : "bad", random, random_ok ? "ok" : "bad")};
}

// 7. The hand-traced cleaning example and idempotency.
Outcome cleaning() {
  CleanConfig::Options o;
  o.variant_map = {{"2-in-1", {"2in1", "two in one"}}};
  o.brands = {"acme"};
  o.min_informative_tokens = 2;
  const CleanConfig config(o);
  const CleanedText example = clean("ACME 2in1 Laptop SN48532-A 2in1 laptop", config);
  const bool example_ok = example.text == "<brand> 2-in-1 laptop" && !example.rejected();

  const std::vector<std::string> words = {
      "ACME",  "acme",  "Acme",    "2in1",   "two",    "in",       "one",     "laptop",
      "Laptops", "tablets", "boxes", "glass", "printing", "printed", "sn48532-a", "#####",
      "123456", "3",    "usb",     "-",      "red",    "<brand>",  "2-in-1",  "x9",
      "chairs", "bus",  "\t",      "Two",    "IN",     "ones",     "a1b",     "!!"};
  Rng rng(kSeed);
  constexpr int kTrials = 10000;
  int failures = 0;
  std::string first;
  for (int i = 0; i < kTrials; ++i) {
    std::string text;
    const std::size_t n = testing::uniform_index(rng, 0, 14);
    for (std::size_t j = 0; j < n; ++j) {
      text += (j ? " " : "") + words[testing::uniform_index(rng, 0, words.size() - 1)];
    }
    const std::string once = clean(text, config).text;
    if (clean(once, config).text != once) {
      if (first.empty()) first = "; first failure on \"" + text + "\"";
      ++failures;
    }
  }
  return {example_ok && failures == 0,
          "example -> \"" + example.text + "\"; " +
              fmt("%d random strings, %d not idempotent", kTrials, failures) + first};
}

// 8. Similarity against the dynamic-programming oracle.
Outcome similarity_oracle() {
  std::vector<std::string> strings = {""};
  for (std::size_t begin = 0, len = 1; len <= 6; ++len) {
    const std::size_t end = strings.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : {'a', 'b', 'c'}) strings.push_back(strings[i] + c);
    }
    begin = end;
  }
  std::size_t pairs = 0, mismatches = 0;
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      ++pairs;
      if (indel_distance(a, b) != testing::dp_indel_distance(a, b) ||
          similarity(a, b) != testing::dp_similarity(a, b)) {
        ++mismatches;
      }
    }
  }
  const double laptop = similarity("laptop", "laptops");
  const bool laptop_ok = std::abs(laptop - 12.0 / 13.0) <= kLaptopSimilarityTolerance;
  return {mismatches == 0 && laptop_ok,
          fmt("%zu pairs, %zu mismatches; sim(laptop, laptops)=%.15f", pairs, mismatches, laptop)};
}

// 9. kNN with k = 1 trained on its own input predicts every gold code.
Outcome self_prediction() {
  Rng rng(kSeed);
  const std::vector<std::string> adjectives = {"red",   "blue",  "green", "steel", "cotton",
                                               "small", "large", "round", "square", "silver"};
  const std::vector<std::string> nouns = {"chair",  "table", "lamp",  "bottle", "cable",
                                          "kettle", "brush", "mirror", "shirt",  "helmet"};
  std::vector<std::string> descriptions;
  for (const auto& a : adjectives) {
    for (const auto& n : nouns) descriptions.push_back(a + " " + n);
  }
  std::shuffle(descriptions.begin(), descriptions.end(), rng);
  descriptions.resize(50);

  const TaxonomyTrie trie = testing::random_trie(rng, CodeKind::kHsn, 4, 3);
  const auto leaves = trie.leaves();
  std::string taxonomy_csv = "kind,code,description\n";
  for (const auto& leaf : leaves) taxonomy_csv += "HSN," + leaf.digits() + ",\n";

  std::string records;
  std::set<std::string> cleaned;
  for (std::size_t i = 0; i < descriptions.size(); ++i) {
    const auto& code = leaves[testing::uniform_index(rng, 0, leaves.size() - 1)];
    nlohmann::ordered_json row;
    row["id"] = "rec" + std::to_string(i);
    row["description"] = descriptions[i];
    row["code"] = code.digits();
    records += row.dump() + "\n";
    cleaned.insert(clean(descriptions[i], CleanConfig::defaults()).text);
  }

  testing::ScratchDir dir;
  const std::string taxonomy = dir.write("taxonomy.csv", taxonomy_csv);
  const std::string data = dir.write("records.jsonl", records);

  const auto start = Clock::now();
  const auto predicted = testing::run_cli({"predict", "--taxonomy", taxonomy, "--input", data,
                                           "--scorer", "knn:" + data + ":1"});
  const std::string predictions = dir.write("predictions.jsonl", predicted.out);
  const auto evaluated =
      testing::run_cli({"eval", "--predictions", predictions, "--gold", data, "--format", "json"});
  const double elapsed = seconds_since(start);

  if (predicted.exit_code != 0 || evaluated.exit_code != 0) {
    return {false, "cli failed: " + predicted.err + evaluated.err};
  }
  const auto report = nlohmann::json::parse(evaluated.out);
  const double exact = report["exact_match"].get<double>();
  const double kappa = report["kappa"].get<double>();
  return {cleaned.size() == 50 && exact == 1.0 && kappa == 1.0 && elapsed < kSelfPredictionSeconds,
          fmt("%zu unique cleaned records, exact_match=%.6f, kappa=%.6f, %.2fs", cleaned.size(),
              exact, kappa, elapsed)};
}

// 10. External scorer protocol conformance.
Outcome external_protocol() {
  Rng rng(kSeed);
  const TaxonomyTrie trie = testing::random_trie(rng, CodeKind::kHsn, 4, 4);
  std::string taxonomy_csv = "kind,code,description\n";
  for (const auto& leaf : trie.leaves()) taxonomy_csv += "HSN," + leaf.digits() + ",\n";
  std::string input;
  const std::vector<std::string> texts = {"laptop",        "office chair", "steel bolt",
                                          "mobile phone",  "######",       "cotton shirt",
                                          "2in1 notebook", "red apple"};
  for (std::size_t i = 0; i < texts.size(); ++i) {
    input += "{\"id\": \"" + std::to_string(i) + "\", \"description\": \"" + texts[i] + "\"}\n";
  }
  testing::ScratchDir dir;
  const std::string taxonomy = dir.write("taxonomy.csv", taxonomy_csv);
  const std::string data = dir.write("input.jsonl", input);
  const std::vector<std::string> base = {"predict", "--taxonomy", taxonomy, "--input", data,
                                         "--top-n", "3"};
  auto with = [&](const std::string& scorer) {
    auto args = base;
    args.insert(args.end(), {"--scorer", scorer});
    return testing::run_cli(args);
  };
  const std::string stub = std::string("external:") + TAXCODE_SCORER_STUB;
  const auto uniform = with("uniform");
  const auto external = with(stub + " uniform");
  const bool identical = uniform.exit_code == 0 && external.exit_code == 0 && !uniform.out.empty() &&
                         uniform.out == external.out;

  std::string malformed;
  bool all_three = true;
  for (const char* mode : {"garbage", "negative", "wrong-id"}) {
    const int code = with(stub + " " + mode).exit_code;
    malformed += std::string(malformed.empty() ? "" : ", ") + mode + "=" + std::to_string(code);
    all_three = all_three && code == 3;
  }
  return {identical && all_three,
          std::string(identical ? "byte-identical" : "outputs differ") + " to uniform (" +
              std::to_string(testing::lines_of(uniform.out).size()) +
              " records); malformed replies exit " + malformed};
}

}  // namespace
}  // namespace taxcode::acceptance

int main() {
  using namespace taxcode::acceptance;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"beam search matches exhaustive oracle", beam_vs_exhaustive},
      {"validity fuzz", validity_fuzz},
      {"top probability monotone in beam width", monotonicity},
      {"codec round-trip", codec_round_trip},
      {"hsn 12345678 decomposition", decomposition_example},
      {"kappa identities", kappa_identities},
      {"cleaning example and idempotency", cleaning},
      {"similarity oracle", similarity_oracle},
      {"end-to-end kNN self-prediction", self_prediction},
      {"external scorer protocol", external_protocol},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first
              << " -- " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed;
}
