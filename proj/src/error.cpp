// Copyright 2026 The eventvad Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eventvad/error.hpp"

namespace eventvad {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kInvalidAlpha: return "InvalidAlpha";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kBadPath: return "BadPath";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kNormViolation: return "NormViolation";
    case ErrorCode::kNoNeighbors: return "NoNeighbors";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kPrecondition: return "PreconditionFailed";
    case ErrorCode::kScorerUnavailable: return "ScorerUnavailable";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kOverlappingRanges: return "OverlappingRanges";
    case ErrorCode::kRangeOutOfBounds: return "RangeOutOfBounds";
    case ErrorCode::kNoResults: return "NoResults";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kScorerUnavailable: return 3;
    case ErrorCode::kDegenerateLabels: return 4;
    default: return 2;
  }
}

}  // namespace eventvad
