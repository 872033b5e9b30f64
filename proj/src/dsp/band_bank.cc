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

#include "scenefoa/dsp/band_bank.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "scenefoa/dsp/fft.h"

namespace scenefoa::dsp {

namespace {

std::vector<double> Lowpass(double cutoff, int sample_rate) {
  using std::numbers::pi;
  constexpr int n = kBandFilterLength;
  constexpr int mid = n / 2;
  std::vector<double> h(n, 0.0);
  if (cutoff >= 0.5 * sample_rate) {
    h[mid] = 1.0;
    return h;
  }
  const double fc = cutoff / sample_rate;
  // Evaluated on one half and mirrored so the taps are exactly symmetric.
  for (int i = 0; i <= mid; ++i) {
    const int k = mid - i;
    const double sinc = k == 0 ? 2.0 * fc : std::sin(2.0 * pi * fc * k) / (pi * k);
    const double x = 2.0 * pi * i / (n - 1);
    const double blackman = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
    h[i] = h[n - 1 - i] = sinc * blackman;
  }
  double sum = 0.0;
  for (double v : h) sum += v;
  for (double& v : h) v /= sum;
  return h;
}

}  // namespace

OctaveBandBank::OctaveBandBank(int sample_rate) : sample_rate_(sample_rate) {
  std::vector<double> prev(kBandFilterLength, 0.0);
  for (int b = 0; b < kBandCount; ++b) {
    std::vector<double> lp(kBandFilterLength, 0.0);
    if (b + 1 < kBandCount) {
      lp = Lowpass(kBandEdges[b], sample_rate);
    } else {
      lp[Delay()] = 1.0;
    }
    taps_[b].resize(kBandFilterLength);
    for (int i = 0; i < kBandFilterLength; ++i) taps_[b][i] = lp[i] - prev[i];
    prev = std::move(lp);
  }
}

std::vector<double> OctaveBandBank::Filter(std::span<const double> x, int band) const {
  const auto full = Convolve(x, taps_[band]);
  if (x.empty()) return {};
  return std::vector<double>(full.begin() + Delay(), full.begin() + Delay() + x.size());
}

std::array<std::vector<double>, kBandCount> OctaveBandBank::Split(std::span<const double> x) const {
  std::array<std::vector<double>, kBandCount> out;
  if (x.empty()) return out;
  const auto full = ConvolveMany(x, std::vector<std::vector<double>>(taps_.begin(), taps_.end()));
  for (int b = 0; b < kBandCount; ++b) {
    out[b].assign(full[b].begin() + Delay(), full[b].begin() + Delay() + x.size());
  }
  return out;
}

std::vector<double> OctaveBandBank::Combine(const std::array<double, kBandCount>& gains) const {
  std::vector<double> h(kBandFilterLength, 0.0);
  if (std::all_of(gains.begin(), gains.end(), [&](double g) { return g == gains[0]; })) {
    h[Delay()] = gains[0];  // the bands sum to a unit impulse
    return h;
  }
  for (int b = 0; b < kBandCount; ++b) {
    if (gains[b] == 0.0) continue;
    for (int i = 0; i < kBandFilterLength; ++i) h[i] += gains[b] * taps_[b][i];
  }
  return h;
}

const OctaveBandBank& OctaveBandBank::ForRate(int sample_rate) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<OctaveBandBank>> banks;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = banks[sample_rate];
  if (!slot) slot = std::make_unique<OctaveBandBank>(sample_rate);
  return *slot;
}

}  // namespace scenefoa::dsp
