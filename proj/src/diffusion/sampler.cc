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

#include "scenefoa/diffusion/sampler.h"

#include <cmath>

#include "scenefoa/core/error.h"

namespace scenefoa::diffusion {

double TrainingLoss(const NoisePredictor& predict, const NoiseSchedule& schedule, const Tensor& x0, Rng& rng) {
  const int t = rng.UniformInt(1, schedule.steps());
  Tensor eps(x0.channels, x0.rows, x0.cols);
  for (double& v : eps.data) v = rng.Normal();
  const Tensor pred = predict(schedule.QSample(x0, t, eps), t);
  if (!pred.SameShape(eps)) throw Error(ErrorCode::kShapeMismatch, "noise estimate shape differs from x0");
  double loss = 0.0;
  for (size_t i = 0; i < eps.size(); ++i) loss += (pred.data[i] - eps.data[i]) * (pred.data[i] - eps.data[i]);
  loss /= static_cast<double>(eps.size());
  if (!std::isfinite(loss)) throw Error(ErrorCode::kNumericalDivergence, "non-finite training loss");
  return loss;
}

Tensor SampleLatent(const NoisePredictor& predict, const NoiseSchedule& schedule, int channels, int rows,
                    int cols, int steps, uint64_t seed) {
  const std::vector<int> grid = schedule.Respaced(steps);
  Rng rng(seed, "sample");
  Tensor x(channels, rows, cols);
  for (double& v : x.data) v = rng.Normal();
  for (int i = static_cast<int>(grid.size()) - 1; i >= 0; --i) {
    const int t = grid[i];
    const int s = i > 0 ? grid[i - 1] : 0;
    const double abar_t = schedule.alpha_bar(t);
    const double abar_s = schedule.alpha_bar(s);
    const Tensor eps = predict(x, t);
    // Clean estimate, then the Gaussian posterior q(x_s | x_t, x0).
    const double alpha_ts = abar_t / abar_s;
    const double beta_ts = 1.0 - alpha_ts;
    const double c0 = std::sqrt(abar_s) * beta_ts / (1.0 - abar_t);
    const double ct = std::sqrt(alpha_ts) * (1.0 - abar_s) / (1.0 - abar_t);
    const double sigma = std::sqrt((1.0 - abar_s) / (1.0 - abar_t) * beta_ts);
    for (size_t j = 0; j < x.size(); ++j) {
      const double x0 = (x.data[j] - std::sqrt(1.0 - abar_t) * eps.data[j]) / std::sqrt(abar_t);
      x.data[j] = s == 0 ? x0 : c0 * x0 + ct * x.data[j];
    }
    if (s > 0) {
      for (double& v : x.data) v += sigma * rng.Normal();
    }
    for (double v : x.data) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kNumericalDivergence, "non-finite sampler state at step " + std::to_string(t));
      }
    }
  }
  return x;
}

int GenerationFrames(size_t samples) {
  const int frames = static_cast<int>(LatentFrames(samples));
  return (frames + kFrameMultiple - 1) / kFrameMultiple * kFrameMultiple;
}

LatentClip Sample(const Denoiser& model, const ConditioningVector& c, size_t samples, int steps, uint64_t seed) {
  const int frames = GenerationFrames(samples);
  const ConditioningVector cond = c.frames() == frames ? c : c.PadTo(frames);
  LatentClip out;
  out.samples = samples;
  out.standardized = true;
  out.tensor = SampleLatent([&](const Tensor& x, int t) { return model.PredictEpsilon(x, t, cond); },
                            model.schedule(), 4, frames, model.config().bins, steps, seed);
  return out;
}

foa::FoaClip Generate(const Denoiser& model, const acoustics::AcousticDescriptors& d, size_t samples, int steps,
                      uint64_t seed) {
  const int frames = GenerationFrames(samples);
  LatentClip latent = Sample(model, BuildConditioning(d, model.config().mode, frames), samples, steps, seed);
  LatentCodec::Destandardize(latent, model.stats());
  return LatentCodec().Decode(latent);
}

}  // namespace scenefoa::diffusion
