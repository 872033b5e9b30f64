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

#include "scenefoa/core/parallel.h"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace scenefoa::parallel {

void SetThreads(int n) {
  if (n < 1) throw std::invalid_argument("thread count must be >= 1");
  omp_set_num_threads(n);
}

int Threads() { return omp_get_max_threads(); }

double TreeSum(std::span<const double> values) {
  if (values.empty()) return 0.0;
  if (values.size() == 1) return values[0];
  const size_t half = values.size() / 2;
  return TreeSum(values.first(half)) + TreeSum(values.subspan(half));
}

}  // namespace scenefoa::parallel
