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

#ifndef SCENEFOA_DIFFUSION_TRAIN_H_
#define SCENEFOA_DIFFUSION_TRAIN_H_

#include <cstdint>
#include <ostream>
#include <vector>

#include "scenefoa/acoustics/descriptors.h"
#include "scenefoa/diffusion/denoiser.h"

namespace scenefoa::diffusion {

struct TrainingPair {
  acoustics::AcousticDescriptors descriptors;
  foa::FoaClip reference;
};

// Standardized latent with frames padded to a multiple of kFrameMultiple and
// its conditioning.
struct TrainExample {
  Tensor latent;
  ConditioningVector cond;
};

struct TrainConfig {
  uint64_t seed = 0;
  int batch_size = 4;
  int steps = 1000;
  double learning_rate = 3e-4;
  ConditioningMode mode = ConditioningMode::kFull;
  int sampler_steps = 50;  // 50, 250 or 1000
  double width = 0.25;
  int crop_frames = 16;     // latent frames per training window
  double weight_decay = 1e-4;
  double grad_clip = 1.0;   // global gradient norm
  double final_lr_fraction = 0.1;  // cosine decay target
  double prior_lr_scale = 10.0;    // learning-rate multiplier of the prior field
  int noise_steps = 1000;
  double snr_gamma = 0.0;  // items weighted by min(SNR, gamma) / SNR; 0 disables

  void Validate() const;  // throws kOutOfRange
};

struct TrainLogEntry {
  int step = 0;
  double loss = 0.0;       // unweighted noise-prediction MSE
  double objective = 0.0;  // weighted loss that was optimized
  double lr = 0.0;
  double wall_ms = 0.0;
};

struct TrainResult {
  Denoiser model;
  std::vector<TrainLogEntry> log;
  double final_loss = 0.0;  // mean over the last tenth of the steps
};

// Encodes references (zero-padded to whole network frames), fits the
// per-channel latent statistics, standardizes, and builds conditioning.
std::vector<TrainExample> PrepareExamples(const std::vector<TrainingPair>& data, ConditioningMode mode,
                                          foa::ChannelStats* stats);

struct BatchItem {
  const TrainExample* example = nullptr;
  int offset = 0;
  int frames = 0;
  int t = 1;
  double weight = 1.0;
  Tensor eps;
};

// The batch for an optimizer step, drawn from (seed, step) only.
std::vector<BatchItem> DrawBatch(const std::vector<TrainExample>& examples, const TrainConfig& cfg,
                                 const NoiseSchedule& schedule, int step);

// Mean weighted loss over the batch; its gradient is written to grad and the
// unweighted mean to mse when given. Per-example gradients run in parallel
// and are reduced in fixed order.
double BatchGradient(const Denoiser& model, const std::vector<BatchItem>& batch, Buffer* grad,
                     double* mse = nullptr);
double BatchGradientSerial(const Denoiser& model, const std::vector<BatchItem>& batch, Buffer* grad,
                           double* mse = nullptr);

class AdamW {
 public:
  AdamW(size_t size, double weight_decay);
  void Step(ParamSet& params, const Buffer& grad, double lr);

 private:
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double epsilon_ = 1e-8;
  double weight_decay_;
  int64_t t_ = 0;
  std::vector<double> m_, v_;
  std::vector<char> decay_;
  std::vector<double> scale_;
};

// Optimizes a fresh denoiser. Each step appends a JSON line (step, loss, lr,
// wall_ms) to `log` when given. A non-finite loss rolls back the last update
// and halves the learning rate once; a second one throws kNumericalDivergence.
TrainResult Train(const std::vector<TrainingPair>& data, const TrainConfig& cfg, std::ostream* log = nullptr);
TrainResult TrainOnExamples(const std::vector<TrainExample>& examples, const foa::ChannelStats& stats,
                            const TrainConfig& cfg, std::ostream* log = nullptr);

}  // namespace scenefoa::diffusion

#endif  // SCENEFOA_DIFFUSION_TRAIN_H_
