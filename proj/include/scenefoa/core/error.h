// Copyright 2026 The scenefoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCENEFOA_CORE_ERROR_H_
#define SCENEFOA_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scenefoa {

enum class ErrorCode {
  kEmptyInput,
  kInvalidRotation,
  kSampleRateMismatch,
  kInvalidHrirSet,
  kEmptyDepthMap,
  kManifestSyntax,
  kManifestInvalid,
  kOutOfRange,
  kDegenerateRay,
  kUnsupportedOrder,
  kInvalidGeometry,
  kShapeMismatch,
  kNumericalDivergence,
  kNoActivity,
  kUndefinedMetric,
  kNotFound,
  kCorruptArtifact,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by manifest validation; carries every violation found.
class ManifestInvalidError : public Error {
 public:
  explicit ManifestInvalidError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace scenefoa

#endif  // SCENEFOA_CORE_ERROR_H_
