// Copyright 2026 The mcdebias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "error.h"

namespace mcdebias {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kFatalValidation: return "FatalValidation";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kZeroRow: return "ZeroRow";
    case ErrorCode::kNotUnit: return "NotUnit";
    case ErrorCode::kNotOrthonormal: return "NotOrthonormal";
    case ErrorCode::kFullyContained: return "FullyContained";
    case ErrorCode::kEqualizeDegenerate: return "EqualizeDegenerate";
    case ErrorCode::kRadicandNegative: return "RadicandNegative";
    case ErrorCode::kPlan: return "PlanError";
    case ErrorCode::kEmptyAttributeSet: return "EmptyAttributeSet";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNoValidGroups: return "NoValidGroups";
  }
  return "Unknown";
}

}  // namespace mcdebias
