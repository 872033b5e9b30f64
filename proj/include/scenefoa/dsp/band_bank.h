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

#ifndef SCENEFOA_DSP_BAND_BANK_H_
#define SCENEFOA_DSP_BAND_BANK_H_

#include <array>
#include <span>
#include <vector>

namespace scenefoa::dsp {

inline constexpr int kBandCount = 7;
inline constexpr int kBandFilterLength = 257;
// Edges between the 125 Hz ... 8 kHz octave bands (geometric midpoints).
inline constexpr std::array<double, kBandCount - 1> kBandEdges = {176.78, 353.55, 707.11,
                                                                 1414.21, 2828.43, 5656.85};

// Zero-phase linear-phase octave filter bank whose bands sum to a unit
// impulse: band 0 is a lowpass, band 6 the complementary highpass and the
// rest are differences of adjacent Blackman-windowed sinc lowpasses.
class OctaveBandBank {
 public:
  explicit OctaveBandBank(int sample_rate);

  int sample_rate() const { return sample_rate_; }
  // Centred taps; tap kBandFilterLength / 2 is time zero.
  const std::vector<double>& taps(int band) const { return taps_[band]; }
  static constexpr int Delay() { return kBandFilterLength / 2; }

  // Same-length zero-phase filtering.
  std::vector<double> Filter(std::span<const double> x, int band) const;
  std::array<std::vector<double>, kBandCount> Split(std::span<const double> x) const;
  // sum_b gains[b] * taps(b): one centred kernel applying per-band gains.
  std::vector<double> Combine(const std::array<double, kBandCount>& gains) const;

  // Shared instance per sample rate.
  static const OctaveBandBank& ForRate(int sample_rate);

 private:
  int sample_rate_;
  std::array<std::vector<double>, kBandCount> taps_;
};

}  // namespace scenefoa::dsp

#endif  // SCENEFOA_DSP_BAND_BANK_H_
