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

#ifndef SCENEFOA_DIFFUSION_SAMPLER_H_
#define SCENEFOA_DIFFUSION_SAMPLER_H_

#include <cstdint>
#include <functional>

#include "scenefoa/acoustics/descriptors.h"
#include "scenefoa/core/random.h"
#include "scenefoa/diffusion/denoiser.h"

namespace scenefoa::diffusion {

// Noise estimate for a noisy latent at step t.
using NoisePredictor = std::function<Tensor(const Tensor& x_t, int t)>;

// Draws t uniform in [1, T] and eps ~ N(0, I) from rng; returns the mean
// squared noise-prediction error.
double TrainingLoss(const NoisePredictor& predict, const NoiseSchedule& schedule, const Tensor& x0, Rng& rng);

// Ancestral reverse process over `steps` respaced steps starting from
// x_T ~ N(0, I). Throws kNumericalDivergence on a non-finite state.
Tensor SampleLatent(const NoisePredictor& predict, const NoiseSchedule& schedule, int channels, int rows,
                    int cols, int steps, uint64_t seed);

// Standardized latent for `samples` output samples; frames are rounded up to
// a multiple of kFrameMultiple.
LatentClip Sample(const Denoiser& model, const ConditioningVector& c, size_t samples, int steps, uint64_t seed);

int GenerationFrames(size_t samples);

// Conditioning from descriptors in the model's mode, sampling, and decoding.
foa::FoaClip Generate(const Denoiser& model, const acoustics::AcousticDescriptors& d, size_t samples,
                      int steps, uint64_t seed);

}  // namespace scenefoa::diffusion

#endif  // SCENEFOA_DIFFUSION_SAMPLER_H_
