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

#ifndef SCENEFOA_DIFFUSION_DENOISER_H_
#define SCENEFOA_DIFFUSION_DENOISER_H_

#include <array>
#include <cstdint>

#include "scenefoa/diffusion/codec.h"
#include "scenefoa/diffusion/conditioning.h"
#include "scenefoa/diffusion/layers.h"
#include "scenefoa/diffusion/schedule.h"
#include "scenefoa/foa/types.h"

namespace scenefoa::diffusion {

inline constexpr int kUnetLevels = 4;
// Frame and bin counts seen by the network must be multiples of this.
inline constexpr int kFrameMultiple = 1 << (kUnetLevels - 1);
inline constexpr int kTimeFeatures = 32;

struct DenoiserConfig {
  double width = 0.25;  // channel multiplier, 32 * width channels at full resolution
  int bins = kLatentBins;
  int max_frames = 640;  // extent of the learned prior field
  ConditioningMode mode = ConditioningMode::kFull;

  int BaseChannels() const;
  int Channels(int level) const { return BaseChannels() << level; }
  int EmbedDim() const;
  void Validate() const;  // throws kOutOfRange
};

// Four-level convolutional U-Net over (frames x bins) with sinusoidal step
// embedding and gated conditioning applied as per-frame affine modulation in
// every block. The network estimates the clean latent as prior + U-Net output
// and reports the implied noise estimate.
class Denoiser {
 public:
  Denoiser(const DenoiserConfig& config, const NoiseSchedule& schedule, uint64_t seed);

  const DenoiserConfig& config() const { return config_; }
  const NoiseSchedule& schedule() const { return schedule_; }
  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }
  const foa::ChannelStats& stats() const { return stats_; }
  void set_stats(const foa::ChannelStats& s) { stats_ = s; }

  // Noise estimate for any frame count; pads to a multiple of kFrameMultiple.
  Tensor PredictEpsilon(const Tensor& x_t, int t, const ConditioningVector& c, int frame_offset = 0) const;

  // Mean squared noise-prediction error for x0 noised with `eps` at step t.
  // When grad is non-null the parameter gradient is added to it. Frames must
  // be a multiple of kFrameMultiple.
  double Loss(const Tensor& x0, const ConditioningVector& c, int t, const Tensor& eps, int frame_offset,
              double* grad) const;

  struct Cache;

 private:
  Tensor Forward(const Tensor& x_t, int t, const ConditioningVector& c, int frame_offset, Cache* cache) const;
  void Backward(const Cache& cache, const Tensor& d_eps, double* g) const;
  void Initialize(uint64_t seed);

  DenoiserConfig config_;
  NoiseSchedule schedule_;
  ParamSet params_;
  foa::ChannelStats stats_;

  Linear time1_, time2_, encoder_, attention_, cond_proj_;
  Conv3x3 conv_in_;
  std::array<ResBlock, kUnetLevels> down_;
  std::array<Conv3x3, kUnetLevels - 1> down_conv_;
  ResBlock mid_;
  std::array<Conv3x3, kUnetLevels - 1> up_conv_;
  std::array<ResBlock, kUnetLevels - 1> up_;
  Film out_film_;
  Conv3x3 conv_out_;
  Linear out_mix_;  // per-frame 4x4 channel mixing from the features
  int out_groups_ = 1;
  size_t prior_ = 0;
};

// Sinusoidal embedding of a diffusion step (kTimeFeatures values).
Eigen::VectorXd StepEmbedding(int t);

}  // namespace scenefoa::diffusion

#endif  // SCENEFOA_DIFFUSION_DENOISER_H_
