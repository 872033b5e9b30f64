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

#ifndef SCENEFOA_ACOUSTICS_GEOMETRY_H_
#define SCENEFOA_ACOUSTICS_GEOMETRY_H_

#include <optional>
#include <vector>

#include "scenefoa/scene/manifest.h"

namespace scenefoa::acoustics {

using foa::Vec3;

// Parameter s in (0, 1) where segment a->b crosses the triangle, if any.
// Endpoints within 1e-9 of the segment ends do not count.
std::optional<double> IntersectSegment(const Vec3& a, const Vec3& b, const scene::Surface& tri);

// Indices of surfaces crossed by segment a->b, ordered along the segment.
// Surfaces listed in `skip` are ignored.
std::vector<int> SegmentCrossings(const Vec3& a, const Vec3& b,
                                  const std::vector<scene::Surface>& surfaces,
                                  const std::vector<int>& skip = {});

// Mirror image of p across the plane of tri.
Vec3 MirrorAcross(const Vec3& p, const scene::Surface& tri);

}  // namespace scenefoa::acoustics

#endif  // SCENEFOA_ACOUSTICS_GEOMETRY_H_
