// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "dataset.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <set>

#include "json.hpp"
#include "taxcode/error.hpp"

namespace taxcode::cli {

namespace {

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string where(const std::string& source, std::size_t line) {
  return source + ":" + std::to_string(line) + ": ";
}

std::string id_of(const nlohmann::json& row, const std::string& at) {
  if (!row.contains("id")) throw Error(ErrorCode::kMalformedInput, at + "missing \"id\"");
  const auto& id = row["id"];
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_integer()) return id.dump();
  throw Error(ErrorCode::kMalformedInput, at + "\"id\" must be a string or integer");
}

std::optional<std::string> optional_string(const nlohmann::json& row, const char* key,
                                           const std::string& at) {
  if (!row.contains(key) || row[key].is_null()) return std::nullopt;
  if (!row[key].is_string()) {
    throw Error(ErrorCode::kMalformedInput, at + "\"" + key + "\" must be a string");
  }
  return row[key].get<std::string>();
}

template <typename Fn>
void for_each_object(std::istream& in, const std::string& source, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string at = where(source, line_no);
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedInput, at + e.what());
    }
    if (!row.is_object()) throw Error(ErrorCode::kMalformedInput, at + "expected a JSON object");
    fn(row, line_no, at);
  }
}

}  // namespace

std::vector<DatasetRecord> read_records(std::istream& in, const std::string& source) {
  std::vector<DatasetRecord> out;
  std::set<std::string> ids;
  for_each_object(in, source, [&](const nlohmann::json& row, std::size_t line, const std::string& at) {
    DatasetRecord r;
    r.id = id_of(row, at);
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::kMalformedInput, at + "duplicate id '" + r.id + "'");
    }
    r.description = optional_string(row, "description", at);
    r.code = optional_string(row, "code", at);
    r.date = optional_string(row, "date", at);
    r.rater = optional_string(row, "rater", at);
    r.line = line;
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<PredictionRecord> read_predictions(std::istream& in, const std::string& source) {
  std::vector<PredictionRecord> out;
  std::set<std::string> ids;
  for_each_object(in, source, [&](const nlohmann::json& row, std::size_t line, const std::string& at) {
    PredictionRecord r;
    r.id = id_of(row, at);
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::kMalformedInput, at + "duplicate id '" + r.id + "'");
    }
    r.code = optional_string(row, "code", at);
    r.line = line;
    out.push_back(std::move(r));
  });
  return out;
}

}  // namespace taxcode::cli
