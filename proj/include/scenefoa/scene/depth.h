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

#ifndef SCENEFOA_SCENE_DEPTH_H_
#define SCENEFOA_SCENE_DEPTH_H_

#include <vector>

#include "scenefoa/foa/types.h"

namespace scenefoa::scene {

// Equirectangular depth image; depth <= 0 marks an invalid pixel.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<double> depth;  // row-major, height x width, metres

  double at(int u, int v) const { return depth[static_cast<size_t>(v) * width + u]; }
  // phi = 2 pi (u + 0.5) / width - pi, theta = pi / 2 - pi (v + 0.5) / height.
  foa::Direction PixelDirection(int u, int v) const;
};

// Valid pixels to points D(u, v) * unit_vector(theta, phi). Throws
// kEmptyDepthMap when no pixel is valid.
std::vector<foa::Vec3> BackProject(const DepthMap& dm);

}  // namespace scenefoa::scene

#endif  // SCENEFOA_SCENE_DEPTH_H_
