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

#ifndef SCENEFOA_FOA_OPS_H_
#define SCENEFOA_FOA_OPS_H_

#include <span>
#include <utility>
#include <vector>

#include "scenefoa/foa/hrir.h"
#include "scenefoa/foa/types.h"

namespace scenefoa::foa {

// SN3D first-order encoding of a mono signal: W = s, (X, Y, Z) = s * u(dir).
FoaClip EncodeSource(std::span<const double> signal, const Direction& dir,
                     int sample_rate = kDefaultSampleRate);

// Per-channel z-score. Channels whose std falls below kStdClampFloor are
// divided by the floor instead.
std::pair<FoaClip, ChannelStats> ZScoreNormalize(const FoaClip& clip);
FoaClip ZScoreDenormalize(const FoaClip& clip, const ChannelStats& stats);

// W is copied untouched; (X, Y, Z) of every sample is multiplied by R.
FoaClip Rotate(const FoaClip& clip, const Rotation& r);

struct StereoSignal {
  std::vector<double> left;
  std::vector<double> right;
};

// Unit vectors of the octahedral virtual speaker layout (+x, -x, +y, -y, +z, -z).
const std::array<Vec3, 6>& VirtualSpeakers();

// Speaker feeds g_k = (W + d_k . (X, Y, Z)) / 6 for one sample.
std::array<double, 6> SpeakerGains(double w, double x, double y, double z);

// Virtual-speaker binaural decode. Each feed is convolved with the HRIR pair
// nearest to its speaker; output length = frames + fir_length - 1.
StereoSignal DecodeBinaural(const FoaClip& clip, const HrirSet& hrirs);

struct DoaFrame {
  size_t window_index = 0;
  double time = 0.0;  // seconds, start of the window
  Direction direction;
};

// Pseudo-intensity DOA per non-overlapping window (the last one may be
// partial). Windows whose mean intensity norm is below 1e-10 * mean(W^2) are
// omitted.
std::vector<DoaFrame> EstimateDoa(const FoaClip& clip, size_t window);

// Reorders to the z-up AmbiX (ACN/SN3D) layout W, Y, Z, X with y to the left,
// and back.
FoaClip ToAmbix(const FoaClip& clip);
FoaClip FromAmbix(const FoaClip& clip);

}  // namespace scenefoa::foa

#endif  // SCENEFOA_FOA_OPS_H_
