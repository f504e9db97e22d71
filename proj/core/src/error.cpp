// Copyright 2026 The taxcode Authors
// SPDX-License-Identifier: Apache-2.0

#include "taxcode/error.hpp"

namespace taxcode {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidCode: return "InvalidCode";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kDuplicateLeaf: return "DuplicateLeaf";
    case ErrorCode::kEmptyTaxonomy: return "EmptyTaxonomy";
    case ErrorCode::kUnknownPrefix: return "UnknownPrefix";
    case ErrorCode::kKindMismatch: return "KindMismatch";
    case ErrorCode::kBadLevelOrder: return "BadLevelOrder";
    case ErrorCode::kMixedKind: return "MixedKind";
    case ErrorCode::kUnknownToken: return "UnknownToken";
    case ErrorCode::kWrongLength: return "WrongLength";
    case ErrorCode::kRejectedInput: return "RejectedInput";
    case ErrorCode::kScorerUnavailable: return "ScorerUnavailable";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kMixedKinds: return "MixedKinds";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kMissingTimestamps: return "MissingTimestamps";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kMissingGoldCode: return "MissingGoldCode";
  }
  return "Unknown";
}

bool is_scorer_error(ErrorCode code) {
  return code == ErrorCode::kScorerUnavailable ||
         code == ErrorCode::kProtocolError || code == ErrorCode::kTimeout;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace taxcode
