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

#ifndef SCENEFOA_ACOUSTICS_REVERB_H_
#define SCENEFOA_ACOUSTICS_REVERB_H_

#include <vector>

#include "scenefoa/acoustics/paths.h"

namespace scenefoa::acoustics {

enum class T60Formula { kEyring, kSabine };

inline constexpr double kMaxMeanAbsorption = 0.9999;

struct ReverbProfile {
  Bands t60{};
  double mixing_time = 0.0;
};

// Area-weighted mean absorption per band over all surfaces.
Bands MeanAbsorption(const scene::SceneManifest& m);

// T60 per band from volume, area and absorption, and mixing time as the
// latest early path (as given) plus 5 ms. Throws kInvalidGeometry if V <= 0.
ReverbProfile ReverbT60(const scene::SceneManifest& m, const std::vector<PropagationPath>& early,
                        T60Formula formula = T60Formula::kEyring);

// Closed forms on scalars, shared with the profile computation.
double SabineT60(double volume, double absorption_area);
double EyringT60(double volume, double area, double mean_absorption);

// Diffuse-to-direct (at 1 m) energy ratio 16 pi (1 - a) / (S a).
double DiffuseEnergy(double area, double mean_absorption);

}  // namespace scenefoa::acoustics

#endif  // SCENEFOA_ACOUSTICS_REVERB_H_
