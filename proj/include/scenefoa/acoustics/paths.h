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

#ifndef SCENEFOA_ACOUSTICS_PATHS_H_
#define SCENEFOA_ACOUSTICS_PATHS_H_

#include <vector>

#include "scenefoa/foa/types.h"
#include "scenefoa/scene/manifest.h"

namespace scenefoa::acoustics {

using foa::Vec3;
using scene::Bands;

inline constexpr double kTransmissionFloor = 1e-4;
inline constexpr double kMinDistance = 0.1;

struct SurfaceHit {
  int surface = -1;  // index into SceneManifest::surfaces
  Bands absorption{};
  bool transmissive = false;  // crossed (occluder) rather than reflected off
};

struct PropagationPath {
  int order = 0;  // reflections; 0 is the direct path
  double length = 0.0;
  foa::Direction arrival;  // from the listener towards the last image, world frame
  std::vector<SurfaceHit> hits;
  long delay = 0;  // samples

  bool occluded() const;
};

// A(b) = prod_j (1 - alpha_j(b)) * exp(-gamma(b) * d) over every hit.
Bands PathAttenuation(const PropagationPath& path, const Bands& gamma);

// Render gain per band: path attenuation with the product over transmissive
// hits floored at kTransmissionFloor, times 1 / max(d, kMinDistance).
Bands PathGain(const PropagationPath& path, const Bands& gamma);

struct OcclusionDescriptor {
  bool visible = true;
  Bands transmission{};
};

// Throws kDegenerateRay when the points are closer than 1e-6 m.
OcclusionDescriptor OcclusionTrace(const Vec3& source, const Vec3& listener,
                                   const scene::SceneManifest& m);

// Direct path plus specular images up to max_order (<= 3). Shoebox rooms use
// the analytic image lattice; other meshes a first-order per-triangle search
// (max_order > 1 throws kUnsupportedOrder). Explicit surfaces inside a
// shoebox occlude path segments but do not reflect.
std::vector<PropagationPath> ImageSources(const scene::SceneManifest& m, const Vec3& source,
                                          const Vec3& listener, int max_order);

// Default order used by rendering and descriptors: 3 for shoeboxes, else 1.
int DefaultOrder(const scene::SceneManifest& m);

}  // namespace scenefoa::acoustics

#endif  // SCENEFOA_ACOUSTICS_PATHS_H_
