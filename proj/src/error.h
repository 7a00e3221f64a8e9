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

#ifndef MCDEBIAS_SRC_ERROR_H_
#define MCDEBIAS_SRC_ERROR_H_

#include <stdexcept>
#include <string>

namespace mcdebias {

// Failure kinds raised by the core library. The C API maps each one onto a
// stable mcd_status value.
enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kMalformedLine,
  kDimensionMismatch,
  kEmptyFile,
  kZeroVector,
  kNotNormalized,
  kSchema,
  kEmptySet,
  kFatalValidation,
  kRankDeficient,
  kShapeMismatch,
  kZeroRow,
  kNotUnit,
  kNotOrthonormal,
  kFullyContained,
  kEqualizeDegenerate,
  kRadicandNegative,
  kPlan,
  kEmptyAttributeSet,
  kLengthMismatch,
  kNoValidGroups,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mcdebias

#endif  // MCDEBIAS_SRC_ERROR_H_
