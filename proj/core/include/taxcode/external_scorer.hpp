// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <mutex>
#include <string>
#include <sys/types.h>

#include "taxcode/error.hpp"
#include "taxcode/scorer.hpp"

namespace taxcode {

struct ExternalScorerOptions {
  // Run through /bin/sh -c.
  std::string command;
  std::chrono::milliseconds timeout{30000};
};

/// Scorer backed by a child process speaking newline-delimited JSON on its
/// standard input and output.
///
///   engine -> {"hello": 1}            child -> {"hello": 1}
///   engine -> {"id": 1, "input": "...", "kind": "HSN",
///              "prefix": ["84"], "candidates": ["71", "73"]}
///   child  -> {"id": 1, "weights": [0.25, 0.75]}
///
/// One request is in flight at a time; concurrent callers are serialized.
/// After a protocol error or timeout the stream is considered out of sync and
/// later calls fail with kScorerUnavailable.
class ExternalScorer final : public Scorer {
 public:
  // Starts the process and completes the handshake. Throws
  // kScorerUnavailable, kProtocolError or kTimeout.
  explicit ExternalScorer(ExternalScorerOptions options);
  ~ExternalScorer() override;

  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  ScoreResponse score(const ScoreRequest& request) const override;
  bool parallel_friendly() const override { return false; }

 private:
  void send_line(const std::string& line) const;
  std::string read_line() const;
  [[noreturn]] void fail(ErrorCode code, const std::string& message) const;

  ExternalScorerOptions options_;
  int fd_ = -1;
  pid_t pid_ = -1;
  mutable std::mutex mutex_;
  mutable std::string buffer_;
  mutable std::int64_t next_id_ = 1;
  mutable bool broken_ = false;
};

}  // namespace taxcode
