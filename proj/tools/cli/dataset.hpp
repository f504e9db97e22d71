// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace taxcode::cli {

// One JSON line of a dataset file. Numeric ids are kept in their decimal
// text form.
struct DatasetRecord {
  std::string id;
  std::optional<std::string> description;
  std::optional<std::string> code;
  std::optional<std::string> date;
  std::optional<std::string> rater;
  std::size_t line = 0;
};

// Reads JSON Lines, skipping blank lines. Throws kMalformedInput naming
// `source` and the line number on invalid JSON, a missing or duplicate id,
// or a field of the wrong type.
std::vector<DatasetRecord> read_records(std::istream& in, const std::string& source);

// One line of `predict` output, as consumed by `eval`.
struct PredictionRecord {
  std::string id;
  std::optional<std::string> code;  // absent for rejected or failed records
  std::size_t line = 0;
};

std::vector<PredictionRecord> read_predictions(std::istream& in, const std::string& source);

}  // namespace taxcode::cli
