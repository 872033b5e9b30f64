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

#ifndef SCENEFOA_CORE_PARALLEL_H_
#define SCENEFOA_CORE_PARALLEL_H_

#include <cstddef>
#include <span>
#include <vector>

namespace scenefoa::parallel {

// Bounds every OpenMP worker pool in the library. n >= 1.
void SetThreads(int n);
int Threads();

// Sums equally sized buffers pairwise in fixed index order, so the result does
// not depend on how many threads produced the parts.
template <typename Buffer>
Buffer TreeSumBuffers(std::vector<Buffer> parts) {
  if (parts.empty()) return {};
  for (size_t stride = 1; stride < parts.size(); stride *= 2) {
    for (size_t i = 0; i + stride < parts.size(); i += 2 * stride) {
      auto& dst = parts[i];
      const auto& src = parts[i + stride];
      if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
      for (size_t k = 0; k < src.size(); ++k) dst[k] += src[k];
    }
  }
  return std::move(parts[0]);
}

inline std::vector<double> TreeSum(std::vector<std::vector<double>> parts) {
  return TreeSumBuffers(std::move(parts));
}
double TreeSum(std::span<const double> values);

}  // namespace scenefoa::parallel

#endif  // SCENEFOA_CORE_PARALLEL_H_
