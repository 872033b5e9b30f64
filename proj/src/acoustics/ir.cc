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

#include "scenefoa/acoustics/ir.h"

#include <algorithm>
#include <cmath>

#include "scenefoa/core/random.h"
#include "scenefoa/dsp/band_bank.h"

namespace scenefoa::acoustics {

namespace {
constexpr double kDecay60 = 6.907755278982137;  // ln(1000)
}  // namespace

Bands RoomDiffuseEnergy(const scene::SceneManifest& m) {
  const Bands mean = MeanAbsorption(m);
  const double area = m.TotalArea();
  Bands e{};
  for (int b = 0; b < scene::kNumBands; ++b) e[b] = area > 0.0 ? DiffuseEnergy(area, mean[b]) : 0.0;
  return e;
}

std::array<std::vector<double>, 4> LateTail(const ReverbProfile& profile, const Bands& diffuse_energy,
                                            int sample_rate, uint64_t seed) {
  const double t60_max = *std::max_element(profile.t60.begin(), profile.t60.end());
  const size_t start = static_cast<size_t>(std::lround(profile.mixing_time * sample_rate));
  const size_t length =
      static_cast<size_t>(std::ceil((profile.mixing_time + t60_max) * sample_rate)) + 1;
  std::array<std::vector<double>, 4> out;
  for (auto& c : out) c.assign(length, 0.0);
  const auto& bank = dsp::OctaveBandBank::ForRate(sample_rate);
  for (int b = 0; b < scene::kNumBands; ++b) {
    if (diffuse_energy[b] <= 0.0) continue;
    // Sum of squares of a0 exp(-6.91 t / T60) over t >= 0 is E.
    const double a0 = std::sqrt(diffuse_energy[b] * 2.0 * kDecay60 / (sample_rate * profile.t60[b]));
    const double rate = kDecay60 / (profile.t60[b] * sample_rate);
    for (int c = 0; c < 4; ++c) {
      Rng rng(seed, "late-tail/" + std::to_string(c) + "/" + std::to_string(b));
      std::vector<double> noise(length);
      for (double& v : noise) v = rng.Normal();
      const auto band = bank.Filter(noise, b);
      const double gain = (c == 0 ? 1.0 : 1.0 / std::sqrt(3.0)) * a0;
      for (size_t i = start; i < length; ++i) {
        out[c][i] += gain * band[i] * std::exp(-rate * static_cast<double>(i));
      }
    }
  }
  return out;
}

foa::FoaClip SynthesizeIr(const std::vector<PropagationPath>& paths, const ReverbProfile& profile,
                          const scene::SceneManifest& m) {
  const auto& bank = dsp::OctaveBandBank::ForRate(m.sample_rate);
  auto tail = LateTail(profile, RoomDiffuseEnergy(m), m.sample_rate, m.seed);
  size_t length = tail[0].size();
  for (const auto& p : paths) {
    length = std::max(length, static_cast<size_t>(p.delay + bank.Delay() + 1));
  }
  foa::FoaClip::Channels ch;
  for (int c = 0; c < 4; ++c) {
    ch[c] = std::move(tail[c]);
    ch[c].resize(length, 0.0);
  }
  for (const auto& p : paths) {
    const auto kernel = bank.Combine(PathGain(p, m.air_attenuation));
    const Vec3 u = p.arrival.UnitVector();
    const std::array<double, 4> enc = {1.0, u.x(), u.y(), u.z()};
    for (int i = 0; i < static_cast<int>(kernel.size()); ++i) {
      const long n = p.delay - bank.Delay() + i;
      if (n < 0) continue;
      for (int c = 0; c < 4; ++c) ch[c][n] += enc[c] * kernel[i];
    }
  }
  return foa::FoaClip(std::move(ch), m.sample_rate);
}

}  // namespace scenefoa::acoustics
