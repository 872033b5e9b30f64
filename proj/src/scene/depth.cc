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

#include "scenefoa/scene/depth.h"

#include <numbers>

#include "scenefoa/core/error.h"

namespace scenefoa::scene {

foa::Direction DepthMap::PixelDirection(int u, int v) const {
  using std::numbers::pi;
  const double phi = 2.0 * pi * (u + 0.5) / width - pi;
  const double theta = pi / 2.0 - pi * (v + 0.5) / height;
  return {theta, phi};
}

std::vector<foa::Vec3> BackProject(const DepthMap& dm) {
  if (dm.width <= 0 || dm.height <= 0 ||
      dm.depth.size() != static_cast<size_t>(dm.width) * dm.height) {
    throw Error(ErrorCode::kEmptyDepthMap, "depth map has no pixels or a size mismatch");
  }
  std::vector<foa::Vec3> points;
  for (int v = 0; v < dm.height; ++v) {
    for (int u = 0; u < dm.width; ++u) {
      const double d = dm.at(u, v);
      if (!(d > 0.0)) continue;
      points.push_back(d * dm.PixelDirection(u, v).UnitVector());
    }
  }
  if (points.empty()) throw Error(ErrorCode::kEmptyDepthMap, "depth map has no valid pixels");
  return points;
}

}  // namespace scenefoa::scene
