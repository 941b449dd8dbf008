// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ontaug {

enum class ErrorCode {
  kCycleDetected,
  kUnknownCode,
  kParseError,
  kDuplicateVisitId,
  kUnknownPhenotype,
  kFeatureDimMismatch,
  kInvalidConfig,
  kIoError,
  kUnknownSeedCode,
  kSeedOutsideFilteredGraph,
  kVocabularyMismatch,
  kDegenerateLabels,
  kSingleClass,
  kTooFewVisits,
  kSizeTooLarge,
  kInvalidArgument,
};

/// Stable identifier used in JSON error payloads and CLI messages.
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ontaug
