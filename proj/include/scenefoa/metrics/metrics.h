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

#ifndef SCENEFOA_METRICS_METRICS_H_
#define SCENEFOA_METRICS_METRICS_H_

#include <vector>

#include "scenefoa/foa/types.h"

namespace scenefoa::metrics {

inline constexpr double kDbCap = 100.0;
inline constexpr double kDoaWindowSeconds = 0.1;
inline constexpr size_t kStftWindow = 512;
inline constexpr size_t kStftHop = 256;

// Mean angle between per-window DOA estimates of two clips over 100 ms
// windows active in both. Throws kNoActivity when no window qualifies.
double DoaError(const foa::FoaClip& ref, const foa::FoaClip& gen);

// 10 log10(sum ref^2 / sum (ref - gen)^2) over all channels, capped at +-100.
double Snr(const foa::FoaClip& ref, const foa::FoaClip& gen);

// Per-channel scale-invariant SDR averaged over non-silent ref channels.
double SiSdr(const foa::FoaClip& ref, const foa::FoaClip& gen);

// Schroeder early decay time of the W channel over the decay after the last
// activity peak (10 ms frames within 20 dB of the loudest). Linear fit of the
// 0 to -10 dB part of the decay curve; EDT = -60 / slope. Throws
// kUndefinedMetric when no such decay exists.
double Edt(const foa::FoaClip& clip);
double EdtFromSignal(const std::vector<double>& w, int sample_rate);
double EdtDiff(const foa::FoaClip& ref, const foa::FoaClip& gen);

// Hann-windowed magnitude spectrogram, frames x (window / 2 + 1).
std::vector<std::vector<double>> MagnitudeSpectrogram(const std::vector<double>& x,
                                                      size_t window = kStftWindow,
                                                      size_t hop = kStftHop);
// sum |M_ref - M_gen| / sum M_ref over channels, frames and bins.
double StftError(const foa::FoaClip& ref, const foa::FoaClip& gen);

}  // namespace scenefoa::metrics

#endif  // SCENEFOA_METRICS_METRICS_H_
