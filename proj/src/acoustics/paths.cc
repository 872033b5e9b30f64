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

#include "scenefoa/acoustics/paths.h"

#include <algorithm>
#include <cmath>

#include "scenefoa/acoustics/geometry.h"
#include "scenefoa/core/error.h"

namespace scenefoa::acoustics {

namespace {

constexpr double kDegenerateDistance = 1e-6;

void AddCrossings(const Vec3& a, const Vec3& b, const scene::SceneManifest& m, size_t first,
                  const std::vector<int>& skip, PropagationPath& path) {
  std::vector<int> skipped = skip;
  for (size_t i = 0; i < first; ++i) skipped.push_back(static_cast<int>(i));
  for (int idx : SegmentCrossings(a, b, m.surfaces, skipped)) {
    path.hits.push_back({idx, m.surfaces[idx].material.absorption, true});
  }
}

long DelaySamples(double length, const scene::SceneManifest& m) {
  return std::lround(length / m.speed_of_sound * m.sample_rate);
}

// Reflection x in [0, 2L) folded into the room [0, L].
double Fold(double x, double size) {
  double r = std::fmod(x, 2.0 * size);
  if (r < 0.0) r += 2.0 * size;
  return r > size ? 2.0 * size - r : r;
}

double ImageCoordinate(double s, double size, int n) {
  return (n % 2 == 0) ? n * size + s : (n + 1) * size - s;
}

bool InTriangle(const Vec3& p, const scene::Surface& tri) {
  const Vec3 e1 = tri.vertices[1] - tri.vertices[0];
  const Vec3 e2 = tri.vertices[2] - tri.vertices[0];
  const Vec3 w = p - tri.vertices[0];
  const double d11 = e1.dot(e1), d12 = e1.dot(e2), d22 = e2.dot(e2);
  const double w1 = w.dot(e1), w2 = w.dot(e2);
  const double den = d11 * d22 - d12 * d12;
  const double u = (d22 * w1 - d12 * w2) / den;
  const double v = (d11 * w2 - d12 * w1) / den;
  return u >= -1e-12 && v >= -1e-12 && u + v <= 1.0 + 1e-12;
}

PropagationPath ShoeboxImage(const scene::SceneManifest& m, const Vec3& source,
                             const Vec3& listener, const std::array<int, 3>& n) {
  const Vec3 size = m.shoebox->size;
  Vec3 image;
  for (int a = 0; a < 3; ++a) image[a] = ImageCoordinate(source[a], size[a], n[a]);
  PropagationPath path;
  path.order = std::abs(n[0]) + std::abs(n[1]) + std::abs(n[2]);
  path.length = (image - listener).norm();
  path.arrival = foa::Direction::FromVector(image - listener);
  path.delay = DelaySamples(path.length, m);

  // Unfold the straight line listener -> image; each plane crossing is a wall
  // bounce, traversed here from the listener backwards to the source.
  struct Crossing {
    double s;
    int face;
  };
  std::vector<Crossing> crossings;
  for (int a = 0; a < 3; ++a) {
    if (n[a] == 0) continue;
    const double from = listener[a], to = image[a];
    const int step = n[a] > 0 ? 1 : -1;
    for (int k = (step > 0 ? 1 : 0), c = 0; c < std::abs(n[a]); ++c, k += step) {
      const double plane = k * size[a];
      const int parity = ((k % 2) + 2) % 2;
      crossings.push_back({(plane - from) / (to - from), 2 * a + parity});
    }
  }
  std::sort(crossings.begin(), crossings.end(), [](const Crossing& x, const Crossing& y) {
    return x.s < y.s;
  });

  const size_t walls = m.shoebox_surface_count();
  std::vector<Vec3> points = {listener};
  std::vector<int> reflectors;
  for (const auto& c : crossings) {
    const Vec3 unfolded = listener + c.s * (image - listener);
    Vec3 p;
    for (int a = 0; a < 3; ++a) p[a] = Fold(unfolded[a], size[a]);
    int tri = 2 * c.face;
    if (!InTriangle(p, m.surfaces[tri])) tri += 1;
    points.push_back(p);
    reflectors.push_back(tri);
  }
  points.push_back(source);
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    if (i > 0) {
      const int r = reflectors[i - 1];
      path.hits.push_back({r, m.surfaces[r].material.absorption, false});
    }
    AddCrossings(points[i], points[i + 1], m, walls, {}, path);
  }
  return path;
}

}  // namespace

bool PropagationPath::occluded() const {
  return std::any_of(hits.begin(), hits.end(), [](const SurfaceHit& h) { return h.transmissive; });
}

Bands PathAttenuation(const PropagationPath& path, const Bands& gamma) {
  Bands a{};
  for (int b = 0; b < scene::kNumBands; ++b) {
    double g = 1.0;
    for (const auto& h : path.hits) g *= 1.0 - h.absorption[b];
    a[b] = g * std::exp(-gamma[b] * path.length);
  }
  return a;
}

Bands PathGain(const PropagationPath& path, const Bands& gamma) {
  const bool occluded = path.occluded();
  const double spread = 1.0 / std::max(path.length, kMinDistance);
  Bands a{};
  for (int b = 0; b < scene::kNumBands; ++b) {
    double reflected = 1.0, transmitted = 1.0;
    for (const auto& h : path.hits) (h.transmissive ? transmitted : reflected) *= 1.0 - h.absorption[b];
    if (occluded) transmitted = std::max(transmitted, kTransmissionFloor);
    a[b] = reflected * transmitted * std::exp(-gamma[b] * path.length) * spread;
  }
  return a;
}

OcclusionDescriptor OcclusionTrace(const Vec3& source, const Vec3& listener,
                                   const scene::SceneManifest& m) {
  const double d = (source - listener).norm();
  if (!(d >= kDegenerateDistance)) {
    throw Error(ErrorCode::kDegenerateRay, "source and listener are less than 1e-6 m apart");
  }
  PropagationPath direct;
  direct.length = d;
  AddCrossings(source, listener, m, 0, {}, direct);
  OcclusionDescriptor out;
  out.visible = direct.hits.empty();
  out.transmission = PathAttenuation(direct, m.air_attenuation);
  if (!out.visible) {
    for (double& t : out.transmission) t = std::max(t, kTransmissionFloor);
  }
  return out;
}

int DefaultOrder(const scene::SceneManifest& m) { return m.shoebox ? 3 : 1; }

std::vector<PropagationPath> ImageSources(const scene::SceneManifest& m, const Vec3& source,
                                          const Vec3& listener, int max_order) {
  if (max_order < 0 || max_order > 3) {
    throw Error(ErrorCode::kOutOfRange, "max_order must be in [0, 3]");
  }
  if (!m.shoebox && max_order > 1) {
    throw Error(ErrorCode::kUnsupportedOrder,
                "reflection order > 1 needs a shoebox room; got " + std::to_string(max_order));
  }
  if (!((source - listener).norm() >= kDegenerateDistance)) {
    throw Error(ErrorCode::kDegenerateRay, "source and listener are less than 1e-6 m apart");
  }
  std::vector<PropagationPath> paths;
  if (m.shoebox) {
    // Orders ascending; within an order, lexicographic lattice offsets.
    for (int order = 0; order <= max_order; ++order) {
      for (int nx = -order; nx <= order; ++nx) {
        for (int ny = -order; ny <= order; ++ny) {
          const int rest = order - std::abs(nx) - std::abs(ny);
          if (rest < 0) continue;
          for (int nz : {-rest, rest}) {
            paths.push_back(ShoeboxImage(m, source, listener, {nx, ny, nz}));
            if (rest == 0) break;
          }
        }
      }
    }
    return paths;
  }

  PropagationPath direct;
  direct.length = (source - listener).norm();
  direct.arrival = foa::Direction::FromVector(source - listener);
  direct.delay = DelaySamples(direct.length, m);
  AddCrossings(listener, source, m, 0, {}, direct);
  paths.push_back(std::move(direct));
  if (max_order == 0) return paths;

  std::vector<Vec3> seen;
  for (int j = 0; j < static_cast<int>(m.surfaces.size()); ++j) {
    const auto& tri = m.surfaces[j];
    const Vec3 image = MirrorAcross(source, tri);
    const auto s = IntersectSegment(listener, image, tri);
    if (!s) continue;
    if (std::any_of(seen.begin(), seen.end(), [&](const Vec3& v) { return (v - image).norm() < 1e-9; })) {
      continue;
    }
    seen.push_back(image);
    const Vec3 point = listener + *s * (image - listener);
    PropagationPath path;
    path.order = 1;
    path.length = (image - listener).norm();
    path.arrival = foa::Direction::FromVector(image - listener);
    path.delay = DelaySamples(path.length, m);
    AddCrossings(listener, point, m, 0, {j}, path);
    path.hits.push_back({j, tri.material.absorption, false});
    AddCrossings(point, source, m, 0, {j}, path);
    paths.push_back(std::move(path));
  }
  return paths;
}

}  // namespace scenefoa::acoustics
