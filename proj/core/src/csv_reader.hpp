// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

namespace taxcode::detail {

// Minimal RFC 4180 reader: comma separated, double-quote escaping, quoted
// fields may span lines, CRLF or LF line endings.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads the next record into `fields`. Returns false at end of input.
  // Throws kMalformedRow on an unterminated quote or a stray quote.
  bool next(std::vector<std::string>& fields);

  // 1-based line on which the most recently returned record started.
  std::size_t record_line() const noexcept { return record_line_; }

 private:
  int get();
  int peek() { return in_.peek(); }

  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  bool first_ = true;
};

}  // namespace taxcode::detail
