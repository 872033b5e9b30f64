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

#include "scenefoa/core/error.h"

namespace scenefoa {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidRotation: return "InvalidRotation";
    case ErrorCode::kSampleRateMismatch: return "SampleRateMismatch";
    case ErrorCode::kInvalidHrirSet: return "InvalidHrirSet";
    case ErrorCode::kEmptyDepthMap: return "EmptyDepthMap";
    case ErrorCode::kManifestSyntax: return "ManifestSyntax";
    case ErrorCode::kManifestInvalid: return "ManifestInvalid";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kDegenerateRay: return "DegenerateRay";
    case ErrorCode::kUnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::kInvalidGeometry: return "InvalidGeometry";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNumericalDivergence: return "NumericalDivergence";
    case ErrorCode::kNoActivity: return "NoActivity";
    case ErrorCode::kUndefinedMetric: return "UndefinedMetric";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kCorruptArtifact: return "CorruptArtifact";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

std::string JoinViolations(const std::vector<std::string>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

}  // namespace

ManifestInvalidError::ManifestInvalidError(std::vector<std::string> violations)
    : Error(ErrorCode::kManifestInvalid, JoinViolations(violations)),
      violations_(std::move(violations)) {}

}  // namespace scenefoa
