// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace taxcode {

enum class ErrorCode {
  kInvalidCode,
  kInvalidArgument,
  kMalformedInput,
  kMalformedRow,
  kDuplicateLeaf,
  kEmptyTaxonomy,
  kUnknownPrefix,
  kKindMismatch,
  kBadLevelOrder,
  kMixedKind,
  kUnknownToken,
  kWrongLength,
  kRejectedInput,
  kScorerUnavailable,
  kProtocolError,
  kTimeout,
  kEmptyTrainingSet,
  kMixedKinds,
  kEmptyInput,
  kLengthMismatch,
  kMissingTimestamps,
  kIdMismatch,
  kMissingGoldCode,
};

std::string_view error_code_name(ErrorCode code);

// True for failures of the scorer process or its protocol.
bool is_scorer_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace taxcode
