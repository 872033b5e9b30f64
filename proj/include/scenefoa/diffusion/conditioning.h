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

#ifndef SCENEFOA_DIFFUSION_CONDITIONING_H_
#define SCENEFOA_DIFFUSION_CONDITIONING_H_

#include <string>
#include <string_view>

#include "scenefoa/acoustics/descriptors.h"
#include "scenefoa/diffusion/tensor.h"

namespace scenefoa::diffusion {

enum class ConditioningMode { kNone, kVisual, kVisualDepth, kFull };

std::string_view ModeName(ConditioningMode mode);  // "none", "visual", "visual+depth", "visual+depth+geometry"
ConditioningMode ParseMode(std::string_view name);  // throws kOutOfRange

inline constexpr int kCondSources = 4;
// Per source: direction (3), activity, log distance, visibility, band
// transmission (7), four reflections x (direction 3, delay, level).
inline constexpr int kPerSourceFeatures = 4 + 1 + 8 + 4 * 5;
// Scene: log T60 (7), mixing time, log volume, log area, mean absorption (7).
inline constexpr int kSceneFeatures = 17;
inline constexpr int kCondFeatures = kCondSources * kPerSourceFeatures + kSceneFeatures;

// One column per latent frame.
struct ConditioningVector {
  Mat features;  // kCondFeatures x frames
  Mat saliency;  // kCondSources x frames

  int frames() const { return static_cast<int>(features.cols()); }
  ConditioningVector Slice(int begin, int count) const;
  // Extends to `count` frames by repeating the last column.
  ConditioningVector PadTo(int count) const;
};

// Nearest descriptor frame for each latent frame, masked to what the mode
// exposes. Only the first kCondSources sources are encoded.
ConditioningVector BuildConditioning(const acoustics::AcousticDescriptors& d, ConditioningMode mode,
                                     int latent_frames);

// a = sigmoid(W_att [f_enc; saliency] + b_att) per column; returns a (x) f_enc.
// w_att is features x (features + sources). Throws kShapeMismatch.
Mat SaliencyGate(const Mat& f_enc, const Mat& saliency, const Mat& w_att, const Eigen::VectorXd& b_att,
                 Mat* gate = nullptr);

}  // namespace scenefoa::diffusion

#endif  // SCENEFOA_DIFFUSION_CONDITIONING_H_
