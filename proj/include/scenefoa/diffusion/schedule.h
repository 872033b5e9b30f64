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

#ifndef SCENEFOA_DIFFUSION_SCHEDULE_H_
#define SCENEFOA_DIFFUSION_SCHEDULE_H_

#include <vector>

#include "scenefoa/diffusion/tensor.h"

namespace scenefoa::diffusion {

// Linear beta schedule. Steps are 1-based: beta(1) .. beta(T).
class NoiseSchedule {
 public:
  explicit NoiseSchedule(int steps = 1000, double beta_start = 1e-4, double beta_end = 0.02);

  int steps() const { return steps_; }
  double beta_start() const { return beta_start_; }
  double beta_end() const { return beta_end_; }
  double beta(int t) const;
  double alpha(int t) const { return 1.0 - beta(t); }
  // Cumulative product; alpha_bar(0) = 1.
  double alpha_bar(int t) const;

  // x_t = sqrt(abar) x0 + sqrt(1 - abar) eps. Throws kOutOfRange for t outside [1, T].
  Tensor QSample(const Tensor& x0, int t, const Tensor& eps) const;

  // `count` steps spread uniformly over [1, T], ascending, always including 1
  // and T when count >= 2. count = 1 gives {T}.
  std::vector<int> Respaced(int count) const;

 private:
  void CheckStep(int t) const;

  int steps_;
  double beta_start_;
  double beta_end_;
  std::vector<double> betas_;
  std::vector<double> alpha_bars_;  // index 0 holds 1
};

}  // namespace scenefoa::diffusion

#endif  // SCENEFOA_DIFFUSION_SCHEDULE_H_
