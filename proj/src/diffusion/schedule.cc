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

#include "scenefoa/diffusion/schedule.h"

#include <cmath>
#include <string>

#include "scenefoa/core/error.h"

namespace scenefoa::diffusion {

NoiseSchedule::NoiseSchedule(int steps, double beta_start, double beta_end)
    : steps_(steps), beta_start_(beta_start), beta_end_(beta_end) {
  if (steps < 1 || !(beta_start > 0.0) || !(beta_end < 1.0) || beta_end < beta_start) {
    throw Error(ErrorCode::kOutOfRange, "invalid noise schedule");
  }
  betas_.resize(steps);
  alpha_bars_.resize(steps + 1);
  alpha_bars_[0] = 1.0;
  for (int i = 0; i < steps; ++i) {
    betas_[i] = steps == 1 ? beta_start
                           : beta_start + (beta_end - beta_start) * i / static_cast<double>(steps - 1);
    alpha_bars_[i + 1] = alpha_bars_[i] * (1.0 - betas_[i]);
  }
}

void NoiseSchedule::CheckStep(int t) const {
  if (t < 1 || t > steps_) {
    throw Error(ErrorCode::kOutOfRange,
                "diffusion step " + std::to_string(t) + " outside [1, " + std::to_string(steps_) + "]");
  }
}

double NoiseSchedule::beta(int t) const {
  CheckStep(t);
  return betas_[t - 1];
}

double NoiseSchedule::alpha_bar(int t) const {
  if (t == 0) return 1.0;
  CheckStep(t);
  return alpha_bars_[t];
}

Tensor NoiseSchedule::QSample(const Tensor& x0, int t, const Tensor& eps) const {
  CheckStep(t);
  if (!x0.SameShape(eps)) throw Error(ErrorCode::kShapeMismatch, "q_sample noise shape differs from x0");
  const double a = std::sqrt(alpha_bars_[t]);
  const double s = std::sqrt(1.0 - alpha_bars_[t]);
  Tensor out = x0;
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = a * x0.data[i] + s * eps.data[i];
  return out;
}

std::vector<int> NoiseSchedule::Respaced(int count) const {
  if (count < 1 || count > steps_) {
    throw Error(ErrorCode::kOutOfRange, "sampler steps " + std::to_string(count) + " outside [1, " +
                                            std::to_string(steps_) + "]");
  }
  if (count == 1) return {steps_};
  std::vector<int> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = 1 + static_cast<int>(std::lround(static_cast<double>(i) * (steps_ - 1) / (count - 1)));
  }
  return grid;
}

}  // namespace scenefoa::diffusion
