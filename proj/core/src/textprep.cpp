// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <unordered_set>

#include "json.hpp"
#include "taxcode/error.hpp"
#include "taxcode/similarity.hpp"

namespace taxcode {

namespace {

constexpr int kMaxVariantPasses = 8;
constexpr int kMaxCleanPasses = 8;
constexpr std::size_t kMinStem = 4;

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string normalize_phrase(std::string_view s) {
  auto tokens = split_whitespace(to_lower(s));
  return join_tokens(tokens);
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool contains_run(std::span<const std::string> haystack, std::span<const std::string> needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<std::ptrdiff_t>(i))) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::string> default_noise_patterns() {
  return {
      R"(.*([a-z][0-9]|[0-9][a-z]).*)",
      R"([[:punct:]]+)",
      R"([0-9]{5,})",
  };
}

CleanConfig::CleanConfig(Options options) : options_(std::move(options)) {
  if (options_.min_informative_tokens < 1) {
    throw Error(ErrorCode::kInvalidArgument, "min_informative_tokens must be at least 1");
  }
  patterns_ = options_.noise_patterns.value_or(default_noise_patterns());
  for (const auto& p : patterns_) {
    try {
      compiled_.emplace_back(p, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kInvalidArgument, "noise pattern '" + p + "': " + e.what());
    }
  }

  for (const auto& brand : options_.brands) {
    const std::string b = normalize_phrase(brand);
    if (b.empty() || b.find(' ') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "brand '" + brand + "' must be a single token");
    }
    brands_lower_.insert(b);
  }
  protected_ = brands_lower_;

  std::set<std::string> canonicals;
  for (const auto& [canonical, variants] : options_.variant_map) {
    const std::string c = normalize_phrase(canonical);
    if (c.empty()) throw Error(ErrorCode::kInvalidArgument, "empty canonical form");
    if (variants.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "canonical '" + canonical + "' has no variants");
    }
    canonicals.insert(c);
    for (auto& t : split_whitespace(c)) protected_.insert(std::move(t));
  }

  std::set<std::string> seen_variants;
  std::set<std::vector<std::string>> seen_keys;
  std::vector<std::pair<std::string, Variant>> prepared;
  for (const auto& [canonical, variants] : options_.variant_map) {
    const std::string c = normalize_phrase(canonical);
    for (const auto& variant : variants) {
      const std::string v = normalize_phrase(variant);
      if (v.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "empty variant for '" + canonical + "'");
      }
      if (canonicals.count(v) != 0) {
        throw Error(ErrorCode::kInvalidArgument, "variant '" + v + "' is also a canonical form");
      }
      if (!seen_variants.insert(v).second) {
        throw Error(ErrorCode::kInvalidArgument, "variant '" + v + "' listed more than once");
      }
      Variant prepared_variant;
      for (const auto& t : split_whitespace(v)) prepared_variant.keys.push_back(lemma(t));
      if (!seen_keys.insert(prepared_variant.keys).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "variant '" + v + "' is indistinguishable from another after lemmatization");
      }
      prepared_variant.canonical = split_whitespace(c);
      prepared.emplace_back(v, std::move(prepared_variant));
    }
  }
  // A canonical form that contains a variant would be rewritten again on the
  // next pass.
  for (const auto& c : canonicals) {
    std::vector<std::string> keys;
    for (const auto& t : split_whitespace(c)) keys.push_back(lemma(t));
    for (const auto& [text, variant] : prepared) {
      if (contains_run(keys, variant.keys)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "canonical form '" + c + "' contains variant '" + text + "'");
      }
    }
  }
  std::sort(prepared.begin(), prepared.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
  for (auto& [text, variant] : prepared) variants_.push_back(std::move(variant));
}

bool CleanConfig::is_noise(std::string_view token) const {
  for (const auto& re : compiled_) {
    if (std::regex_match(token.begin(), token.end(), re)) return true;
  }
  return false;
}

bool CleanConfig::is_brand(std::string_view token) const {
  return brands_lower_.count(to_lower(token)) != 0;
}

std::string CleanConfig::lemma(std::string_view token) const {
  if (protected_.count(std::string(token)) != 0) return std::string(token);
  return strip_suffixes(token);
}

CleanConfig load_clean_config(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("clean config: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kMalformedInput, "clean config must be an object");

  CleanConfig::Options options;
  try {
    if (doc.contains("noise_patterns")) {
      options.noise_patterns = doc.at("noise_patterns").get<std::vector<std::string>>();
    }
    if (doc.contains("variant_map")) {
      options.variant_map =
          doc.at("variant_map").get<std::map<std::string, std::vector<std::string>>>();
    }
    if (doc.contains("brands")) {
      const auto brands = doc.at("brands").get<std::vector<std::string>>();
      options.brands.insert(brands.begin(), brands.end());
    }
    if (doc.contains("min_informative_tokens")) {
      const auto n = doc.at("min_informative_tokens").get<long long>();
      if (n < 1) throw Error(ErrorCode::kInvalidArgument, "min_informative_tokens must be >= 1");
      options.min_informative_tokens = static_cast<std::size_t>(n);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("clean config: ") + e.what());
  }
  return CleanConfig(std::move(options));
}

std::string_view rejection_reason_name(RejectionReason reason) {
  return reason == RejectionReason::kIncomplete ? "incomplete" : "empty";
}

std::vector<CatalogEntry> load_catalog(std::istream& in) {
  std::vector<CatalogEntry> out;
  try {
    const auto doc = nlohmann::json::parse(in);
    if (!doc.is_array()) throw Error(ErrorCode::kMalformedInput, "catalog must be an array");
    for (const auto& item : doc) {
      CatalogEntry entry;
      entry.canonical_description = item.at("description").get<std::string>();
      if (item.contains("tags")) entry.category_tags = item.at("tags").get<std::vector<std::string>>();
      if (entry.canonical_description.empty()) {
        throw Error(ErrorCode::kMalformedInput, "catalog entry with empty description");
      }
      out.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("catalog: ") + e.what());
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::string strip_suffixes(std::string_view token) {
  std::string word(token);
  if (word.empty() || !std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
    return word;
  }
  while (true) {
    // "-es" comes off only after ss, x, ch or sh. Other "-es" words keep the
    // "e" ("cases" -> "case"), and a short sibilant stem is left whole rather
    // than losing just the "s" ("boxes" stays, not "boxe").
    const bool sibilant_es =
        ends_with(word, "es") && [&] {
          const std::string_view stem(word.data(), word.size() - 2);
          return ends_with(stem, "ss") || ends_with(stem, "x") || ends_with(stem, "ch") ||
                 ends_with(stem, "sh");
        }();
    if (ends_with(word, "ing") && word.size() - 3 >= kMinStem) {
      word.resize(word.size() - 3);
    } else if (ends_with(word, "ed") && word.size() - 2 >= kMinStem) {
      word.resize(word.size() - 2);
    } else if (sibilant_es) {
      if (word.size() - 2 < kMinStem) break;
      word.resize(word.size() - 2);
    } else if (ends_with(word, "s") && !ends_with(word, "ss") && word.size() - 1 >= kMinStem) {
      word.resize(word.size() - 1);
    } else {
      break;
    }
  }
  return word;
}

std::vector<std::string> dedup_repeats(std::vector<std::string> tokens) {
  while (true) {
    bool removed = false;
    for (std::size_t len = tokens.size() / 2; len >= 1 && !removed; --len) {
      for (std::size_t i = 0; i + 2 * len <= tokens.size(); ++i) {
        const auto first = tokens.begin() + static_cast<std::ptrdiff_t>(i);
        const auto second = first + static_cast<std::ptrdiff_t>(len);
        if (std::equal(first, second, second)) {
          tokens.erase(second, second + static_cast<std::ptrdiff_t>(len));
          removed = true;
          break;
        }
      }
    }
    if (!removed) return tokens;
  }
}

std::vector<std::string> strip_noise(std::span<const std::string> tokens,
                                     const CleanConfig& config) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!config.is_noise(t)) out.push_back(t);
  }
  return out;
}

std::string normalize_variants(std::string_view text, const CleanConfig& config) {
  auto tokens = split_whitespace(to_lower(text));
  const auto& variants = config.variants();

  for (int pass = 0; pass < kMaxVariantPasses && !variants.empty(); ++pass) {
    std::vector<std::string> keys;
    keys.reserve(tokens.size());
    for (const auto& t : tokens) keys.push_back(config.lemma(t));

    std::vector<std::string> out;
    bool changed = false;
    std::size_t i = 0;
    while (i < tokens.size()) {
      const CleanConfig::Variant* hit = nullptr;
      for (const auto& v : variants) {
        const std::size_t n = v.keys.size();
        if (i + n <= keys.size() &&
            std::equal(v.keys.begin(), v.keys.end(), keys.begin() + static_cast<std::ptrdiff_t>(i))) {
          hit = &v;
          break;
        }
      }
      if (hit != nullptr) {
        out.insert(out.end(), hit->canonical.begin(), hit->canonical.end());
        i += hit->keys.size();
        changed = true;
      } else {
        out.push_back(std::move(tokens[i]));
        ++i;
      }
    }
    tokens = std::move(out);
    if (!changed) break;
  }

  for (auto& t : tokens) t = config.lemma(t);
  return join_tokens(tokens);
}

std::vector<std::string> mask_brands(std::span<const std::string> tokens,
                                     const CleanConfig& config) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    out.push_back(config.is_brand(t) ? std::string(kBrandToken) : t);
  }
  return out;
}

CleanedText clean(std::string_view description, const CleanConfig& config) {
  auto one_pass = [&config](std::string_view text) {
    auto tokens = split_whitespace(normalize_variants(text, config));
    tokens = strip_noise(tokens, config);
    tokens = mask_brands(tokens, config);
    return dedup_repeats(std::move(tokens));
  };

  auto tokens = one_pass(description);
  std::string text = join_tokens(tokens);
  // Removing tokens can bring a variant phrase or a repeat together, so run
  // the stages again until the text no longer changes.
  for (int pass = 1; pass < kMaxCleanPasses; ++pass) {
    auto next = one_pass(text);
    std::string next_text = join_tokens(next);
    if (next_text == text) break;
    tokens = std::move(next);
    text = std::move(next_text);
  }

  CleanedText result{std::move(text), std::nullopt};
  const auto informative = static_cast<std::size_t>(std::count_if(
      tokens.begin(), tokens.end(), [](const std::string& t) { return t != kBrandToken; }));
  if (tokens.empty()) {
    result.rejection = RejectionReason::kEmpty;
  } else if (informative < config.min_informative_tokens()) {
    result.rejection = RejectionReason::kIncomplete;
  }
  return result;
}

CleanedText enrich(const CleanedText& cleaned, std::span<const CatalogEntry> catalog,
                   double threshold) {
  if (cleaned.rejected()) throw Error(ErrorCode::kRejectedInput, "cannot enrich rejected text");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0, 1]");
  }
  const CatalogEntry* best = nullptr;
  double best_score = -1.0;
  for (const auto& entry : catalog) {
    const double s = similarity(cleaned.text, entry.canonical_description);
    if (s > best_score) {
      best_score = s;
      best = &entry;
    }
  }
  if (best == nullptr || best_score < threshold) return cleaned;

  auto tokens = split_whitespace(cleaned.text);
  std::unordered_set<std::string> seen(tokens.begin(), tokens.end());
  auto append = [&](std::string_view phrase) {
    for (auto& t : split_whitespace(to_lower(phrase))) {
      if (seen.insert(t).second) tokens.push_back(std::move(t));
    }
  };
  append(best->canonical_description);
  for (const auto& tag : best->category_tags) append(tag);
  return CleanedText{join_tokens(tokens), std::nullopt};
}

}  // namespace taxcode
