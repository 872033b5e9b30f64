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

#include "scenefoa/scene/tracks.h"

#include <algorithm>

#include "scenefoa/core/error.h"

namespace scenefoa::scene {

namespace {

// Index of the last key with key.t <= t, or -1.
template <typename Key>
int LastAtOrBefore(const std::vector<Key>& keys, double t) {
  auto it = std::upper_bound(keys.begin(), keys.end(), t,
                             [](double v, const Key& k) { return v < k.t; });
  return static_cast<int>(it - keys.begin()) - 1;
}

}  // namespace

Vec3 InterpolatePosition(const std::vector<PositionKey>& keys, double t) {
  if (keys.empty()) return Vec3::Zero();
  const int i = LastAtOrBefore(keys, t);
  if (i < 0) return keys.front().p;
  if (i + 1 >= static_cast<int>(keys.size())) return keys.back().p;
  const auto& a = keys[i];
  const auto& b = keys[i + 1];
  const double u = (t - a.t) / (b.t - a.t);
  return a.p + u * (b.p - a.p);
}

bool InterpolateActivity(const std::vector<ActivityKey>& keys, double t) {
  if (keys.empty()) return true;
  const int i = LastAtOrBefore(keys, t);
  return i < 0 ? keys.front().on : keys[i].on;
}

foa::Rotation InterpolateOrientation(const std::vector<OrientationKey>& keys, double t) {
  if (keys.empty()) return foa::Rotation::Identity();
  const int i = LastAtOrBefore(keys, t);
  if (i < 0) return keys.front().q;
  if (i + 1 >= static_cast<int>(keys.size())) return keys.back().q;
  const auto& a = keys[i];
  const auto& b = keys[i + 1];
  return foa::Rotation::Slerp(a.q, b.q, (t - a.t) / (b.t - a.t));
}

SceneState SampleTracks(const SceneManifest& m, double t) {
  if (!(t >= 0.0 && t <= m.duration)) {
    throw Error(ErrorCode::kOutOfRange,
                "t = " + std::to_string(t) + " outside [0, " + std::to_string(m.duration) + "]");
  }
  SceneState s;
  s.sources.reserve(m.sources.size());
  for (const auto& src : m.sources) {
    s.sources.push_back({InterpolatePosition(src.positions, t), InterpolateActivity(src.active, t)});
  }
  s.listener_position = InterpolatePosition(m.listener.positions, t);
  s.listener_orientation = InterpolateOrientation(m.listener.orientations, t);
  return s;
}

}  // namespace scenefoa::scene
