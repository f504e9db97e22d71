// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace taxcode {

namespace {

void require_non_empty(std::span<const LabeledPair> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptyInput, "no labelled pairs");
}

std::string month_text(std::chrono::year_month ym) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ym.year()),
                static_cast<unsigned>(ym.month()));
  return buf;
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

std::string kappa_label(const std::optional<TaxCode>& code) {
  return code ? code->digits() : std::string("<none>");
}

ClassificationScores precision_recall_f1(std::span<const LabeledPair> pairs) {
  require_non_empty(pairs);
  struct Counts {
    std::size_t tp = 0, predicted = 0, gold = 0;
  };
  std::map<std::string, Counts> classes;
  std::size_t exact = 0;
  for (const auto& p : pairs) {
    const std::string gold = p.gold.digits();
    ++classes[gold].gold;
    if (p.predicted) {
      const std::string pred = p.predicted->digits();
      ++classes[pred].predicted;
      if (pred == gold && p.predicted->kind() == p.gold.kind()) {
        ++classes[gold].tp;
        ++exact;
      }
    }
  }

  ClassificationScores out;
  std::size_t gold_classes = 0;
  for (const auto& [label, c] : classes) {
    if (c.gold == 0) continue;
    ++gold_classes;
    const double precision =
        c.predicted == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(c.predicted);
    const double recall = static_cast<double>(c.tp) / static_cast<double>(c.gold);
    const double f1 =
        precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    out.macro_precision += precision;
    out.macro_recall += recall;
    out.macro_f1 += f1;
  }
  const auto k = static_cast<double>(gold_classes);
  out.macro_precision /= k;
  out.macro_recall /= k;
  out.macro_f1 /= k;
  out.exact_match = static_cast<double>(exact) / static_cast<double>(pairs.size());
  return out;
}

std::vector<double> per_level_accuracy(std::span<const LabeledPair> pairs) {
  require_non_empty(pairs);
  const CodeKind kind = pairs.front().gold.kind();
  for (const auto& p : pairs) {
    if (p.gold.kind() != kind || (p.predicted && p.predicted->kind() != kind)) {
      throw Error(ErrorCode::kMixedKinds, "pairs mix HSN and SAC codes");
    }
  }
  const std::size_t depth = depth_of(kind);
  std::vector<std::size_t> hits(depth, 0);
  for (const auto& p : pairs) {
    if (!p.predicted) continue;
    const auto pred = p.predicted->segments();
    const auto gold = p.gold.segments();
    for (std::size_t i = 0; i < depth && pred[i] == gold[i]; ++i) ++hits[i];
  }
  std::vector<double> out(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    out[i] = static_cast<double>(hits[i]) / static_cast<double>(pairs.size());
  }
  return out;
}

std::vector<MonthlyKappa> kappa_over_time(std::span<const LabeledPair> pairs) {
  struct Group {
    std::vector<std::string> predicted, gold;
  };
  std::map<std::chrono::year_month, Group> groups;
  for (const auto& p : pairs) {
    if (!p.date) throw Error(ErrorCode::kMissingTimestamps, "pair without a date");
    auto& g = groups[std::chrono::year_month(p.date->year(), p.date->month())];
    g.predicted.push_back(kappa_label(p.predicted));
    g.gold.push_back(p.gold.digits());
  }
  std::vector<MonthlyKappa> out;
  for (const auto& [month, g] : groups) {
    MonthlyKappa entry{month, g.gold.size(), std::nullopt};
    const std::set<std::string> distinct_gold(g.gold.begin(), g.gold.end());
    if (distinct_gold.size() >= 2) {
      entry.kappa = cohens_kappa<std::string>(g.predicted, g.gold);
    }
    out.push_back(entry);
  }
  return out;
}

EvalReport evaluate(std::span<const LabeledPair> pairs) {
  require_non_empty(pairs);
  for (const auto& p : pairs) {
    if (p.predicted && p.predicted->kind() != p.gold.kind()) {
      throw Error(ErrorCode::kKindMismatch, "prediction and gold differ in code kind");
    }
  }
  EvalReport report;
  report.records = pairs.size();
  report.scores = precision_recall_f1(pairs);
  report.per_level_accuracy = per_level_accuracy(pairs);

  std::vector<std::string> predicted, gold;
  for (const auto& p : pairs) {
    predicted.push_back(kappa_label(p.predicted));
    gold.push_back(p.gold.digits());
  }
  report.kappa = cohens_kappa<std::string>(predicted, gold);

  const bool all_dated =
      std::all_of(pairs.begin(), pairs.end(), [](const LabeledPair& p) { return p.date.has_value(); });
  if (all_dated) report.kappa_by_month = kappa_over_time(pairs);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["records"] = report.records;
  doc["macro_precision"] = report.scores.macro_precision;
  doc["macro_recall"] = report.scores.macro_recall;
  doc["macro_f1"] = report.scores.macro_f1;
  doc["exact_match"] = report.scores.exact_match;
  doc["per_level_accuracy"] = report.per_level_accuracy;
  doc["kappa"] = report.kappa;
  if (report.kappa_by_month) {
    auto& months = doc["kappa_by_month"] = nlohmann::ordered_json::array();
    for (const auto& m : *report.kappa_by_month) {
      nlohmann::ordered_json entry;
      entry["month"] = month_text(m.month);
      entry["count"] = m.count;
      entry["kappa"] = m.kappa ? nlohmann::ordered_json(*m.kappa) : nlohmann::ordered_json();
      entry["degenerate"] = m.degenerate();
      months.push_back(std::move(entry));
    }
  } else {
    doc["kappa_by_month"] = nullptr;
  }
  return doc.dump(2);
}

std::string report_to_table(const EvalReport& report) {
  std::ostringstream os;
  auto row = [&os](std::string_view name, const std::string& value) {
    os << std::left << std::setw(20) << name << value << '\n';
  };
  row("records", std::to_string(report.records));
  row("macro_precision", fixed(report.scores.macro_precision));
  row("macro_recall", fixed(report.scores.macro_recall));
  row("macro_f1", fixed(report.scores.macro_f1));
  row("exact_match", fixed(report.scores.exact_match));
  for (std::size_t i = 0; i < report.per_level_accuracy.size(); ++i) {
    row("accuracy@" + std::string(level_name(level_at(i))), fixed(report.per_level_accuracy[i]));
  }
  row("kappa", fixed(report.kappa));
  if (report.kappa_by_month) {
    os << '\n' << std::left << std::setw(10) << "month" << std::right << std::setw(8) << "count"
       << std::setw(12) << "kappa" << '\n';
    for (const auto& m : *report.kappa_by_month) {
      os << std::left << std::setw(10) << month_text(m.month) << std::right << std::setw(8)
         << m.count << std::setw(12) << (m.kappa ? fixed(*m.kappa) : std::string("degenerate"))
         << '\n';
    }
  }
  return os.str();
}

std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view text) {
  if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  auto number = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  const auto y = number(0, 4), m = number(5, 2), d = number(8, 2);
  if (!y || !m || !d) return std::nullopt;
  const std::chrono::year_month_day date{std::chrono::year{*y},
                                         std::chrono::month{static_cast<unsigned>(*m)},
                                         std::chrono::day{static_cast<unsigned>(*d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

}  // namespace taxcode
