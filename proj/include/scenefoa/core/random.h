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

#ifndef SCENEFOA_CORE_RANDOM_H_
#define SCENEFOA_CORE_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace scenefoa {

// Derives an independent subsystem seed from the global seed and a label
// such as "scene:12" or "train:step".
uint64_t DeriveSeed(uint64_t seed, std::string_view label);

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  Rng(uint64_t seed, std::string_view label) : engine_(DeriveSeed(seed, label)) {}

  double Normal() { return normal_(engine_); }
  double Uniform() { return uniform_(engine_); }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * uniform_(engine_); }
  // Inclusive range.
  int UniformInt(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace scenefoa

#endif  // SCENEFOA_CORE_RANDOM_H_
