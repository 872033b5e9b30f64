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

#include "scenefoa/acoustics/reverb.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenefoa/core/error.h"

namespace scenefoa::acoustics {

namespace {
constexpr double kSabineConstant = 0.161;
constexpr double kMinMeanAbsorption = 1e-6;
constexpr double kMixingMargin = 0.005;
}  // namespace

double SabineT60(double volume, double absorption_area) {
  return kSabineConstant * volume / absorption_area;
}

double EyringT60(double volume, double area, double mean_absorption) {
  const double a = std::clamp(mean_absorption, kMinMeanAbsorption, kMaxMeanAbsorption);
  return kSabineConstant * volume / (-area * std::log(1.0 - a));
}

double DiffuseEnergy(double area, double mean_absorption) {
  if (mean_absorption >= 1.0 - 1e-12) return 0.0;
  const double a = std::max(mean_absorption, kMinMeanAbsorption);
  return 16.0 * std::numbers::pi * (1.0 - a) / (area * a);
}

Bands MeanAbsorption(const scene::SceneManifest& m) {
  Bands mean{};
  const double area = m.TotalArea();
  if (area <= 0.0) return mean;
  for (const auto& s : m.surfaces) {
    const double w = s.Area() / area;
    for (int b = 0; b < scene::kNumBands; ++b) mean[b] += w * s.material.absorption[b];
  }
  return mean;
}

ReverbProfile ReverbT60(const scene::SceneManifest& m, const std::vector<PropagationPath>& early,
                        T60Formula formula) {
  const double volume = m.RoomVolume();
  const double area = m.TotalArea();
  if (!(volume > 0.0) || !(area > 0.0)) {
    throw Error(ErrorCode::kInvalidGeometry, "room volume and surface area must be > 0");
  }
  const Bands mean = MeanAbsorption(m);
  ReverbProfile p;
  for (int b = 0; b < scene::kNumBands; ++b) {
    const double a = std::clamp(mean[b], kMinMeanAbsorption, kMaxMeanAbsorption);
    p.t60[b] = formula == T60Formula::kSabine ? SabineT60(volume, area * a)
                                              : EyringT60(volume, area, a);
  }
  long latest = 0;
  for (const auto& path : early) latest = std::max(latest, path.delay);
  p.mixing_time = static_cast<double>(latest) / m.sample_rate + kMixingMargin;
  return p;
}

}  // namespace scenefoa::acoustics
