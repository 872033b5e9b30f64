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

#ifndef SCENEFOA_SCENE_TRACKS_H_
#define SCENEFOA_SCENE_TRACKS_H_

#include <vector>

#include "scenefoa/scene/manifest.h"

namespace scenefoa::scene {

struct SourceState {
  Vec3 position = Vec3::Zero();
  bool active = true;
};

struct SceneState {
  std::vector<SourceState> sources;
  Vec3 listener_position = Vec3::Zero();
  foa::Rotation listener_orientation;
};

// Piecewise-linear positions, slerped orientations, zero-order-hold
// activity. Throws kOutOfRange unless 0 <= t <= duration.
SceneState SampleTracks(const SceneManifest& m, double t);

Vec3 InterpolatePosition(const std::vector<PositionKey>& keys, double t);
bool InterpolateActivity(const std::vector<ActivityKey>& keys, double t);
foa::Rotation InterpolateOrientation(const std::vector<OrientationKey>& keys, double t);

}  // namespace scenefoa::scene

#endif  // SCENEFOA_SCENE_TRACKS_H_
