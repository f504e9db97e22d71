// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/textprep.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "taxcode/error.hpp"
#include "taxcode/similarity.hpp"

namespace taxcode {
namespace {

using Tokens = std::vector<std::string>;

CleanConfig laptop_config(std::size_t min_informative = 2) {
  CleanConfig::Options o;
  o.variant_map = {{"2-in-1", {"2in1", "two in one"}}};
  o.brands = {"acme"};
  o.min_informative_tokens = min_informative;
  return CleanConfig(o);
}

ErrorCode config_error(CleanConfig::Options o) {
  try {
    CleanConfig config(std::move(o));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "config accepted";
  return ErrorCode::kEmptyInput;
}

TEST(Dedup, Examples) {
  EXPECT_EQ(dedup_repeats({"red", "apple", "red", "apple"}), (Tokens{"red", "apple"}));
  EXPECT_EQ(dedup_repeats({"red", "apple", "green", "apple"}),
            (Tokens{"red", "apple", "green", "apple"}));
  EXPECT_EQ(dedup_repeats({"a", "a", "a", "a"}), (Tokens{"a"}));
  EXPECT_EQ(dedup_repeats({}), Tokens{});
}

TEST(Dedup, OutputHasNoAdjacentRepeat) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> len(0, 14), word(0, 2);
  const Tokens words = {"x", "y", "z"};
  for (int round = 0; round < 5000; ++round) {
    Tokens in(static_cast<std::size_t>(len(rng)));
    for (auto& t : in) t = words[static_cast<std::size_t>(word(rng))];
    const Tokens out = dedup_repeats(in);
    ASSERT_FALSE(testing::has_adjacent_repeat(out));
    EXPECT_LE(out.size(), in.size());
  }
}

TEST(StripNoise, Examples) {
  const CleanConfig config = CleanConfig::defaults();
  EXPECT_EQ(strip_noise(Tokens{"laptop", "sn48532-a", "portable"}, config),
            (Tokens{"laptop", "portable"}));
  EXPECT_EQ(strip_noise(Tokens{"usb", "3"}, config), (Tokens{"usb", "3"}));
  EXPECT_EQ(strip_noise(Tokens{"item", "#####", "123456789"}, config), (Tokens{"item"}));
  EXPECT_EQ(strip_noise(Tokens{"2-in-1", "12345", "1234"}, config), (Tokens{"2-in-1", "1234"}));
}

TEST(StripNoise, CustomPatterns) {
  CleanConfig::Options o;
  o.noise_patterns = std::vector<std::string>{"x+"};
  const CleanConfig config(o);
  EXPECT_EQ(strip_noise(Tokens{"xx", "sn48532", "xy"}, config), (Tokens{"sn48532", "xy"}));
}

TEST(NormalizeVariants, Examples) {
  const CleanConfig config = laptop_config();
  EXPECT_EQ(normalize_variants("2in1 Laptop", config), "2-in-1 laptop");
  EXPECT_EQ(normalize_variants("two in one  tablets", config), "2-in-1 tablet");
  EXPECT_EQ(normalize_variants("", config), "");
  EXPECT_EQ(normalize_variants("  Two In One ", config), "2-in-1");
  EXPECT_EQ(normalize_variants("one in two", config), "one in two");
}

TEST(NormalizeVariants, Lemmatization) {
  EXPECT_EQ(strip_suffixes("tablets"), "tablet");
  EXPECT_EQ(strip_suffixes("boxes"), "boxes");
  EXPECT_EQ(strip_suffixes("brushes"), "brush");
  EXPECT_EQ(strip_suffixes("glasses"), "glass");
  EXPECT_EQ(strip_suffixes("cases"), "case");
  EXPECT_EQ(strip_suffixes("printing"), "print");
  EXPECT_EQ(strip_suffixes("printed"), "print");
  EXPECT_EQ(strip_suffixes("glass"), "glass");
  EXPECT_EQ(strip_suffixes("bus"), "bus");
  EXPECT_EQ(strip_suffixes("ring"), "ring");
  EXPECT_EQ(strip_suffixes("red"), "red");
  EXPECT_EQ(strip_suffixes("usb3s"), "usb3s");
}

TEST(MaskBrands, Examples) {
  const CleanConfig config = laptop_config();
  EXPECT_EQ(mask_brands(Tokens{"acme", "laptop"}, config), (Tokens{"<brand>", "laptop"}));
  EXPECT_EQ(mask_brands(Tokens{"laptop"}, config), (Tokens{"laptop"}));
  EXPECT_EQ(mask_brands(Tokens{"ACME", "acme"}, config), (Tokens{"<brand>", "<brand>"}));
}

TEST(Clean, HandTracedExample) {
  const CleanedText out = clean("ACME 2in1 Laptop SN48532-A 2in1 laptop", laptop_config());
  EXPECT_EQ(out.text, "<brand> 2-in-1 laptop");
  EXPECT_FALSE(out.rejected());
}

TEST(Clean, Rejections) {
  const CleanConfig config = laptop_config();
  const CleanedText empty = clean("#### 12345", config);
  EXPECT_EQ(empty.rejection, RejectionReason::kEmpty);
  EXPECT_EQ(empty.text, "");
  const CleanedText brand_only = clean("acme", config);
  EXPECT_EQ(brand_only.rejection, RejectionReason::kIncomplete);
  EXPECT_EQ(clean("acme laptop", config).rejection, RejectionReason::kIncomplete);
  EXPECT_FALSE(clean("acme laptop", laptop_config(1)).rejected());
}

TEST(Clean, OutputIsLowercaseSingleSpaced) {
  const CleanedText out = clean("  Red\tAPPLE\n\n Crate  ", CleanConfig::defaults());
  EXPECT_EQ(out.text, "red apple crate");
}

TEST(Clean, IsIdempotentOnRandomTokenStrings) {
  const CleanConfig config = laptop_config(1);
  const Tokens words = {"acme", "ACME", "2in1",  "two",    "in",     "one",   "laptop",
                        "Laptops", "boxes", "sn4853", "#####", "123456", "3",     "usb",
                        "tablets", "printing", "2-in-1", "red",  "red",    "glass", "<brand>"};
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> len(0, 12), pick(0, words.size() - 1);
  for (int round = 0; round < 5000; ++round) {
    std::string text;
    const std::size_t n = len(rng);
    for (std::size_t i = 0; i < n; ++i) text += (i ? " " : "") + words[pick(rng)];
    const CleanedText once = clean(text, config);
    const CleanedText twice = clean(once.text, config);
    ASSERT_EQ(twice.text, once.text) << "input: " << text;
  }
}

TEST(CleanConfig, RejectsInconsistentOptions) {
  CleanConfig::Options bad_regex;
  bad_regex.noise_patterns = std::vector<std::string>{"("};
  EXPECT_EQ(config_error(bad_regex), ErrorCode::kInvalidArgument);

  CleanConfig::Options empty_list;
  empty_list.variant_map = {{"2-in-1", {}}};
  EXPECT_EQ(config_error(empty_list), ErrorCode::kInvalidArgument);

  CleanConfig::Options shared;
  shared.variant_map = {{"a", {"x"}}, {"b", {"x"}}};
  EXPECT_EQ(config_error(shared), ErrorCode::kInvalidArgument);

  CleanConfig::Options zero;
  zero.min_informative_tokens = 0;
  EXPECT_EQ(config_error(zero), ErrorCode::kInvalidArgument);
}

TEST(CleanConfig, LoadsJson) {
  std::istringstream in(
      R"({"noise_patterns": ["[0-9]+"], "variant_map": {"2-in-1": ["2in1"]},)"
      R"( "brands": ["Acme"], "min_informative_tokens": 2})");
  const CleanConfig config = load_clean_config(in);
  EXPECT_TRUE(config.is_brand("ACME"));
  EXPECT_TRUE(config.is_noise("42"));
  EXPECT_FALSE(config.is_noise("#"));
  EXPECT_EQ(config.min_informative_tokens(), 2u);

  std::istringstream broken("{\"brands\": 3}");
  try {
    load_clean_config(broken);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedInput);
  }
}

TEST(Enrich, SimilarityBelowThresholdLeavesTextUnchanged) {
  const std::vector<CatalogEntry> catalog = {{"2-in-1 laptop", {"portable", "computer"}}};
  const CleanedText input{"2-in-1 laptop 13 inch", std::nullopt};
  // LCS is the 13 characters of "2-in-1 laptop"; D = 21 + 13 - 26 = 8.
  EXPECT_NEAR(similarity(input.text, "2-in-1 laptop"), 26.0 / 34.0, 1e-12);
  EXPECT_EQ(enrich(input, catalog, 0.8).text, input.text);
  EXPECT_EQ(enrich(input, catalog, 0.75).text, "2-in-1 laptop 13 inch portable computer");
  EXPECT_EQ(enrich({"office chair", std::nullopt}, catalog, 0.8).text, "office chair");
}

TEST(Enrich, ExactMatchAppendsTags) {
  const std::vector<CatalogEntry> catalog = {{"office chair", {"furniture"}},
                                             {"2-in-1 laptop", {"Portable", "computer"}}};
  EXPECT_EQ(enrich({"2-in-1 laptop", std::nullopt}, catalog, 0.8).text,
            "2-in-1 laptop portable computer");
}

TEST(Enrich, TiesGoToFirstEntry) {
  const std::vector<CatalogEntry> catalog = {{"abc", {"first"}}, {"abc", {"second"}}};
  EXPECT_EQ(enrich({"abc", std::nullopt}, catalog, 1.0).text, "abc first");
}

TEST(Enrich, Errors) {
  const std::vector<CatalogEntry> catalog = {{"x", {}}};
  try {
    enrich({"", RejectionReason::kEmpty}, catalog, 0.8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRejectedInput);
  }
  try {
    enrich({"x", std::nullopt}, catalog, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Catalog, LoadsJson) {
  std::istringstream in(R"([{"description": "2-in-1 laptop", "tags": ["portable"]}])");
  const auto catalog = load_catalog(in);
  ASSERT_EQ(catalog.size(), 1u);
  EXPECT_EQ(catalog[0].category_tags, (Tokens{"portable"}));
  std::istringstream empty_desc(R"([{"description": "", "tags": []}])");
  EXPECT_THROW(load_catalog(empty_desc), Error);
}

}  // namespace
}  // namespace taxcode
