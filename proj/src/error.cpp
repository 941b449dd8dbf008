// SPDX-License-Identifier: Apache-2.0
#include "ontaug/error.hpp"

namespace ontaug {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kUnknownCode: return "UnknownCode";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateVisitId: return "DuplicateVisitId";
    case ErrorCode::kUnknownPhenotype: return "UnknownPhenotype";
    case ErrorCode::kFeatureDimMismatch: return "FeatureDimMismatch";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnknownSeedCode: return "UnknownSeedCode";
    case ErrorCode::kSeedOutsideFilteredGraph: return "SeedOutsideFilteredGraph";
    case ErrorCode::kVocabularyMismatch: return "VocabularyMismatch";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kTooFewVisits: return "TooFewVisits";
    case ErrorCode::kSizeTooLarge: return "SizeTooLarge";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ontaug
