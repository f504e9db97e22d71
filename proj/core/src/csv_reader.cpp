// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "csv_reader.hpp"

#include "taxcode/error.hpp"

namespace taxcode::detail {

int CsvReader::get() {
  int c = in_.get();
  if (c == '\n') ++line_;
  return c;
}

bool CsvReader::next(std::vector<std::string>& fields) {
  fields.clear();
  if (first_) {
    first_ = false;
    // UTF-8 byte order mark
    if (peek() == 0xEF) {
      char bom[3];
      in_.read(bom, 3);
      if (in_.gcount() != 3 || static_cast<unsigned char>(bom[1]) != 0xBB ||
          static_cast<unsigned char>(bom[2]) != 0xBF) {
        throw Error(ErrorCode::kMalformedRow, "line 1: invalid leading bytes");
      }
    }
  }
  if (peek() == std::char_traits<char>::eof()) return false;

  record_line_ = line_;
  std::string field;
  bool quoted = false;
  bool after_quote = false;  // closing quote seen, only a separator may follow
  while (true) {
    int c = get();
    if (quoted) {
      if (c == std::char_traits<char>::eof()) {
        throw Error(ErrorCode::kMalformedRow,
                    "line " + std::to_string(record_line_) + ": unterminated quoted field");
      }
      if (c == '"') {
        if (peek() == '"') {
          get();
          field.push_back('"');
        } else {
          quoted = false;
          after_quote = true;
        }
      } else {
        field.push_back(static_cast<char>(c));
      }
      continue;
    }
    if (c == ',' ) {
      fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
      continue;
    }
    if (c == '\r' && peek() == '\n') continue;
    if (c == '\n' || c == std::char_traits<char>::eof()) {
      fields.push_back(std::move(field));
      return true;
    }
    if (after_quote) {
      throw Error(ErrorCode::kMalformedRow,
                  "line " + std::to_string(line_) + ": unexpected character after closing quote");
    }
    if (c == '"') {
      if (!field.empty()) {
        throw Error(ErrorCode::kMalformedRow,
                    "line " + std::to_string(line_) + ": quote inside unquoted field");
      }
      quoted = true;
      continue;
    }
    field.push_back(static_cast<char>(c));
  }
}

}  // namespace taxcode::detail
