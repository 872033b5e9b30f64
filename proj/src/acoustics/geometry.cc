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

#include "scenefoa/acoustics/geometry.h"

#include <algorithm>
#include <cmath>

namespace scenefoa::acoustics {

namespace {
constexpr double kEndEpsilon = 1e-9;
}  // namespace

std::optional<double> IntersectSegment(const Vec3& a, const Vec3& b, const scene::Surface& tri) {
  // Moller-Trumbore on the segment a + s (b - a).
  const Vec3 dir = b - a;
  const Vec3 e1 = tri.vertices[1] - tri.vertices[0];
  const Vec3 e2 = tri.vertices[2] - tri.vertices[0];
  const Vec3 p = dir.cross(e2);
  const double det = e1.dot(p);
  if (std::abs(det) < 1e-14 * dir.norm() * e1.norm() * e2.norm()) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 t = a - tri.vertices[0];
  const double u = t.dot(p) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 q = t.cross(e1);
  const double v = dir.dot(q) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double s = e2.dot(q) * inv;
  if (s <= kEndEpsilon || s >= 1.0 - kEndEpsilon) return std::nullopt;
  return s;
}

std::vector<int> SegmentCrossings(const Vec3& a, const Vec3& b,
                                  const std::vector<scene::Surface>& surfaces,
                                  const std::vector<int>& skip) {
  std::vector<std::pair<double, int>> hits;
  for (int i = 0; i < static_cast<int>(surfaces.size()); ++i) {
    if (std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
    if (auto s = IntersectSegment(a, b, surfaces[i])) hits.emplace_back(*s, i);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<int> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.second);
  return out;
}

Vec3 MirrorAcross(const Vec3& p, const scene::Surface& tri) {
  const Vec3 n = tri.Normal();
  return p - 2.0 * (p - tri.vertices[0]).dot(n) * n;
}

}  // namespace scenefoa::acoustics
