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

#ifndef SCENEFOA_DIFFUSION_CODEC_H_
#define SCENEFOA_DIFFUSION_CODEC_H_

#include <vector>

#include "scenefoa/diffusion/tensor.h"
#include "scenefoa/foa/types.h"

namespace scenefoa::diffusion {

inline constexpr int kCodecWindow = 512;
inline constexpr int kCodecHop = 256;
inline constexpr int kLatentBins = kCodecHop;

// Latent FOA: 4 channels x frames x 256 bins, optionally standardized.
struct LatentClip {
  Tensor tensor;
  size_t samples = 0;  // length of the encoded clip
  bool standardized = false;
};

size_t LatentFrames(size_t samples);  // max(2, ceil(samples / hop))

// Circular MDCT with a sine window: an orthonormal lapped transform over the
// clip zero-padded to frames * hop samples and treated as periodic.
class LatentCodec {
 public:
  LatentCodec();

  // Throws kSampleRateMismatch unless the clip is 16 kHz.
  LatentClip Encode(const foa::FoaClip& clip) const;
  foa::FoaClip Decode(const LatentClip& latent) const;

  std::vector<double> Forward(const std::vector<double>& x, size_t frames) const;
  std::vector<double> Inverse(const double* coeffs, size_t frames) const;  // frames * hop samples

  // Per-channel mean / std of latent coefficients over a corpus.
  static foa::ChannelStats Statistics(const std::vector<LatentClip>& corpus);
  static void Standardize(LatentClip& l, const foa::ChannelStats& stats);
  static void Destandardize(LatentClip& l, const foa::ChannelStats& stats);

 private:
  Eigen::MatrixXd basis_;  // window x bins, windowed and scaled
};

}  // namespace scenefoa::diffusion

#endif  // SCENEFOA_DIFFUSION_CODEC_H_
