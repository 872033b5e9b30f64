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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "scenefoa/acoustics/descriptors.h"
#include "scenefoa/acoustics/geometry.h"
#include "scenefoa/acoustics/ir.h"
#include "scenefoa/acoustics/paths.h"
#include "scenefoa/acoustics/render.h"
#include "scenefoa/acoustics/reverb.h"
#include "scenefoa/core/error.h"
#include "scenefoa/core/parallel.h"
#include "scenefoa/core/random.h"
#include "scenefoa/foa/ops.h"
#include "scenefoa/scene/manifest.h"

namespace scenefoa::acoustics {
namespace {

using scene::SceneManifest;

std::filesystem::path Fixture(const std::string& name) {
  return std::filesystem::path(SCENEFOA_SOURCE_DIR) / "fixtures" / "scenes" / name;
}

Bands Filled(double v) {
  Bands b;
  b.fill(v);
  return b;
}

SceneManifest Shoebox(double lx, double ly, double lz, double alpha = 0.1) {
  SceneManifest m;
  m.shoebox = scene::Shoebox{Vec3(lx, ly, lz)};
  m.materials["uniform"] = {Filled(alpha), Filled(0.1)};
  m.shoebox->faces.fill("uniform");
  m.surfaces = scene::ShoeboxSurfaces(*m.shoebox, m.materials);
  return m;
}

// Same room, with the shoebox replaced by its explicit triangles.
SceneManifest AsMesh(SceneManifest m) {
  for (auto& s : m.surfaces) s.from_shoebox = false;
  m.shoebox.reset();
  return m;
}

PropagationPath RandomPath(Rng& rng) {
  PropagationPath p;
  p.length = rng.Uniform(0.01, 50.0);
  const int hits = rng.UniformInt(0, 5);
  for (int j = 0; j < hits; ++j) {
    SurfaceHit h;
    for (double& a : h.absorption) a = rng.Uniform();
    p.hits.push_back(h);
  }
  p.order = hits;
  return p;
}

// Independent evaluation: per band, one factor at a time, then the air term.
double ScalarAttenuation(const PropagationPath& p, double gamma, int band) {
  double log_gain = -gamma * p.length;
  for (const auto& h : p.hits) log_gain += std::log1p(-h.absorption[band]);
  return std::exp(log_gain);
}

TEST(PathAttenuation, Examples) {
  PropagationPath p;
  p.length = 7.0;
  for (double a : PathAttenuation(p, Filled(0.0))) EXPECT_EQ(a, 1.0);
  p.hits.push_back({0, Filled(0.5), false});
  for (double a : PathAttenuation(p, Filled(0.0))) EXPECT_DOUBLE_EQ(a, 0.5);
  p.hits = {{0, Filled(0.2), false}, {1, Filled(0.5), false}};
  p.length = 10.0;
  for (double a : PathAttenuation(p, Filled(0.01))) EXPECT_NEAR(a, 0.36193496721438384, 1e-15);
}

TEST(PathAttenuation, MatchesScalarOracleOnRandomPaths) {
  Rng rng(101);
  for (int i = 0; i < 10000; ++i) {
    const PropagationPath p = RandomPath(rng);
    Bands gamma;
    for (double& g : gamma) g = rng.Uniform(0.0, 0.05);
    const Bands a = PathAttenuation(p, gamma);
    for (int b = 0; b < scene::kNumBands; ++b) {
      EXPECT_NEAR(a[b], ScalarAttenuation(p, gamma[b], b), 1e-12);
      EXPECT_GE(a[b], 0.0);
      EXPECT_LE(a[b], 1.0);
    }
  }
}

TEST(PathAttenuation, MonotoneInAbsorptionAirAndDistance) {
  Rng rng(102);
  for (int i = 0; i < 2000; ++i) {
    PropagationPath p = RandomPath(rng);
    Bands gamma;
    for (double& g : gamma) g = rng.Uniform(0.0, 0.05);
    const Bands base = PathAttenuation(p, gamma);
    PropagationPath more = p;
    if (!more.hits.empty()) {
      auto& a = more.hits[rng.UniformInt(0, static_cast<int>(more.hits.size()) - 1)].absorption;
      for (double& v : a) v = v + rng.Uniform() * (1.0 - v);
    }
    more.length += rng.Uniform(0.0, 5.0);
    Bands more_gamma = gamma;
    for (double& g : more_gamma) g += rng.Uniform(0.0, 0.01);
    const Bands worse = PathAttenuation(more, more_gamma);
    for (int b = 0; b < scene::kNumBands; ++b) EXPECT_LE(worse[b], base[b]);
  }
}

TEST(Occlusion, EmptyRoomIsVisible) {
  const SceneManifest m = Shoebox(6, 3, 5);
  const auto o = OcclusionTrace(Vec3(1, 1, 1), Vec3(4, 2, 3), m);
  EXPECT_TRUE(o.visible);
  for (double t : o.transmission) EXPECT_EQ(t, 1.0);
}

TEST(Occlusion, OpaqueWallHitsFloor) {
  SceneManifest m = Shoebox(6, 3, 5);
  scene::Surface wall;
  wall.vertices = {Vec3(3, -1, -1), Vec3(3, 5, -1), Vec3(3, -1, 9)};
  wall.material.absorption = Filled(1.0);
  wall.material_ref = "@inline";
  m.surfaces.push_back(wall);
  const auto o = OcclusionTrace(Vec3(1, 1, 1), Vec3(5, 1.5, 2), m);
  EXPECT_FALSE(o.visible);
  for (double t : o.transmission) EXPECT_EQ(t, kTransmissionFloor);
}

TEST(Occlusion, PerBandTransmissionWithAir) {
  SceneManifest m = Shoebox(6, 3, 5);
  m.air_attenuation = Filled(0.01);
  scene::Surface wall;
  wall.vertices = {Vec3(3, -1, -1), Vec3(3, 5, -1), Vec3(3, -1, 9)};
  wall.material.absorption = Filled(0.0);
  wall.material.absorption[3] = 0.36;
  m.surfaces.push_back(wall);
  const Vec3 s(1, 1, 1), l(5, 1, 1);
  const auto o = OcclusionTrace(s, l, m);
  EXPECT_FALSE(o.visible);
  const double air = std::exp(-0.01 * 4.0);
  for (int b = 0; b < scene::kNumBands; ++b) {
    EXPECT_NEAR(o.transmission[b], (b == 3 ? 0.64 : 1.0) * air, 1e-15);
  }
  EXPECT_THROW(OcclusionTrace(s, s + Vec3(1e-7, 0, 0), m), Error);
}

TEST(ImageSources, FirstOrderCount) {
  const SceneManifest m = Shoebox(4, 3, 5);
  const auto paths = ImageSources(m, Vec3(1, 1, 1), Vec3(3, 2, 4), 1);
  ASSERT_EQ(paths.size(), 7u);
  EXPECT_EQ(paths[0].order, 0);
  EXPECT_TRUE(paths[0].hits.empty());
  for (size_t i = 1; i < paths.size(); ++i) {
    EXPECT_EQ(paths[i].order, 1);
    EXPECT_EQ(paths[i].hits.size(), 1u);
  }
}

TEST(ImageSources, FloorImage) {
  const SceneManifest m = Shoebox(4, 3, 5);
  const auto paths = ImageSources(m, Vec3(1, 1, 1), Vec3(3, 1, 1), 1);
  const auto floor = std::find_if(paths.begin(), paths.end(), [&](const PropagationPath& p) {
    return p.order == 1 && m.surfaces[p.hits[0].surface].vertices[0].y() == 0.0 &&
           m.surfaces[p.hits[0].surface].Normal().y() > 0.5;
  });
  ASSERT_NE(floor, paths.end());
  EXPECT_NEAR(floor->length, std::sqrt(8.0), 1e-12);
  const Vec3 u = floor->arrival.UnitVector();
  EXPECT_NEAR((u - Vec3(-2, -2, 0).normalized()).norm(), 0.0, 1e-12);
}

// Image lattice in closed form: per axis, images at 2 q L + s (|2q| bounces)
// and 2 q L - s (|2q - 1| bounces).
std::vector<double> LatticeLengths(const Vec3& size, const Vec3& s, const Vec3& l, int order) {
  struct Axis {
    double coord;
    int bounces;
  };
  std::array<std::vector<Axis>, 3> axes;
  for (int a = 0; a < 3; ++a) {
    for (int q = -order; q <= order; ++q) {
      axes[a].push_back({2.0 * q * size[a] + s[a], std::abs(2 * q)});
      axes[a].push_back({2.0 * q * size[a] - s[a], std::abs(2 * q - 1)});
    }
  }
  std::vector<double> out;
  for (const auto& x : axes[0]) {
    for (const auto& y : axes[1]) {
      for (const auto& z : axes[2]) {
        if (x.bounces + y.bounces + z.bounces > order) continue;
        out.push_back((Vec3(x.coord, y.coord, z.coord) - l).norm());
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Repeated mirroring across walls, the textbook way.
std::vector<double> MirroredLengths(const Vec3& size, const Vec3& s, const Vec3& l, int order) {
  std::vector<Vec3> frontier = {s}, all = {s};
  std::vector<std::vector<int>> last_wall = {{-1}};
  std::vector<int> walls_of_frontier = {-1};
  for (int k = 0; k < order; ++k) {
    std::vector<Vec3> next;
    std::vector<int> next_walls;
    for (size_t i = 0; i < frontier.size(); ++i) {
      for (int w = 0; w < 6; ++w) {
        if (w == walls_of_frontier[i]) continue;  // mirroring back is the parent
        Vec3 img = frontier[i];
        const int a = w / 2;
        img[a] = (w % 2 == 0) ? -img[a] : 2.0 * size[a] - img[a];
        next.push_back(img);
        next_walls.push_back(w);
      }
    }
    // Distinct images only.
    std::vector<Vec3> uniq;
    std::vector<int> uniq_walls;
    for (size_t i = 0; i < next.size(); ++i) {
      const bool dup = std::any_of(all.begin(), all.end(), [&](const Vec3& v) { return (v - next[i]).norm() < 1e-9; }) ||
                       std::any_of(uniq.begin(), uniq.end(), [&](const Vec3& v) { return (v - next[i]).norm() < 1e-9; });
      if (!dup) {
        uniq.push_back(next[i]);
        uniq_walls.push_back(next_walls[i]);
      }
    }
    all.insert(all.end(), uniq.begin(), uniq.end());
    frontier = uniq;
    walls_of_frontier = uniq_walls;
  }
  std::vector<double> out;
  for (const auto& v : all) out.push_back((v - l).norm());
  std::sort(out.begin(), out.end());
  return out;
}

TEST(ImageSources, LengthsMatchLatticeEnumeration) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 size(rng.Uniform(2, 10), rng.Uniform(2, 5), rng.Uniform(2, 10));
    const Vec3 s(rng.Uniform(0.1, size.x() - 0.1), rng.Uniform(0.1, size.y() - 0.1),
                 rng.Uniform(0.1, size.z() - 0.1));
    const Vec3 l(rng.Uniform(0.1, size.x() - 0.1), rng.Uniform(0.1, size.y() - 0.1),
                 rng.Uniform(0.1, size.z() - 0.1));
    const SceneManifest m = Shoebox(size.x(), size.y(), size.z());
    for (int order : {0, 1, 2}) {
      const auto paths = ImageSources(m, s, l, order);
      std::vector<double> got;
      for (const auto& p : paths) got.push_back(p.length);
      std::sort(got.begin(), got.end());
      const auto lattice = LatticeLengths(size, s, l, order);
      const auto mirrored = MirroredLengths(size, s, l, order);
      ASSERT_EQ(got.size(), lattice.size());
      ASSERT_EQ(got.size(), mirrored.size());
      for (size_t i = 0; i < got.size(); ++i) {
        EXPECT_NEAR(got[i], lattice[i], 1e-9);
        EXPECT_NEAR(got[i], mirrored[i], 1e-9);
      }
    }
  }
}

TEST(ImageSources, CountsAndHitsPerOrder) {
  const SceneManifest m = Shoebox(5, 3, 4);
  EXPECT_EQ(ImageSources(m, Vec3(1, 1, 1), Vec3(3, 2, 2), 2).size(), 1u + 6u + 18u);
  const auto paths = ImageSources(m, Vec3(1, 1, 1), Vec3(3, 2, 2), 3);
  EXPECT_EQ(paths.size(), 1u + 6u + 18u + 38u);
  for (const auto& p : paths) {
    EXPECT_EQ(static_cast<int>(p.hits.size()), p.order);
    EXPECT_GT(p.length, 0.0);
    EXPECT_EQ(p.delay, std::lround(p.length / m.speed_of_sound * m.sample_rate));
  }
}

TEST(ImageSources, ReflectionPointsLieOnTheirWalls) {
  const SceneManifest m = Shoebox(5, 3, 4, 0.3);
  // Order-2 path attenuation equals (1 - 0.3)^2 regardless of the walls hit.
  for (const auto& p : ImageSources(m, Vec3(1, 1, 1), Vec3(3, 2, 2), 2)) {
    for (double a : PathAttenuation(p, Filled(0.0))) EXPECT_NEAR(a, std::pow(0.7, p.order), 1e-15);
  }
}

TEST(ImageSources, GenericMeshFirstOrderMatchesShoebox) {
  const SceneManifest box = Shoebox(4, 3, 5);
  const SceneManifest mesh = AsMesh(box);
  const Vec3 s(1, 1, 1), l(3, 2, 4);
  auto a = ImageSources(box, s, l, 1);
  auto b = ImageSources(mesh, s, l, 1);
  ASSERT_EQ(a.size(), b.size());
  std::vector<double> la, lb;
  for (const auto& p : a) la.push_back(p.length);
  for (const auto& p : b) lb.push_back(p.length);
  std::sort(la.begin(), la.end());
  std::sort(lb.begin(), lb.end());
  for (size_t i = 0; i < la.size(); ++i) EXPECT_NEAR(la[i], lb[i], 1e-9);
  try {
    ImageSources(mesh, s, l, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedOrder);
  }
}

TEST(ImageSources, OccludersOnReflectedSegmentsAreTransmissive) {
  const SceneManifest m = scene::LoadManifest(Fixture("pillar_occlusion.json"));
  const auto paths = ImageSources(m, Vec3(6, 1.2, 3), Vec3(2, 1.2, 3), 1);
  auto count = [](const PropagationPath& p, bool transmissive) {
    return std::count_if(p.hits.begin(), p.hits.end(),
                         [&](const SurfaceHit& h) { return h.transmissive == transmissive; });
  };
  EXPECT_EQ(count(paths[0], true), 2);
  for (const auto& p : paths) {
    if (p.order == 0) continue;
    EXPECT_EQ(count(p, false), 1);
    const Vec3 reflector = m.surfaces[std::find_if(p.hits.begin(), p.hits.end(), [](const SurfaceHit& h) {
                                        return !h.transmissive;
                                      })->surface].Normal();
    // Only the side walls at z = 0 and z = 6 route around the pillar.
    EXPECT_EQ(count(p, true), std::abs(reflector.z()) > 0.5 ? 0 : 2);
  }
}

TEST(Reverb, SabineClosedForm) {
  EXPECT_NEAR(SabineT60(100.0, 130.0 * 0.2), 0.161 * 100.0 / 26.0, 1e-15);
  EXPECT_NEAR(SabineT60(100.0, 26.0), 0.6192307692307693, 1e-12);
  const SceneManifest m = Shoebox(5, 4, 5, 0.2);  // V = 100, S = 130
  const auto p = ReverbT60(m, {}, T60Formula::kSabine);
  for (double t : p.t60) EXPECT_NEAR(t, 0.161 * 100.0 / 26.0, 1e-9);
  EXPECT_NEAR(p.mixing_time, 0.005, 1e-15);
}

TEST(Reverb, EyringClosedFormAndClamp) {
  const SceneManifest m = Shoebox(5, 4, 5, 0.2);
  for (double t : ReverbT60(m, {}).t60) EXPECT_NEAR(t, 0.161 * 100.0 / (-130.0 * std::log(0.8)), 1e-9);
  const SceneManifest dead = Shoebox(5, 4, 5, 1.0);
  for (double t : ReverbT60(dead, {}).t60) {
    EXPECT_TRUE(std::isfinite(t));
    EXPECT_NEAR(t, 0.161 * 100.0 / (-130.0 * std::log(1e-4)), 1e-9);
  }
}

TEST(Reverb, DoublingAbsorptionHalvesSabine) {
  const auto a = ReverbT60(Shoebox(6, 3, 4, 0.15), {}, T60Formula::kSabine);
  const auto b = ReverbT60(Shoebox(6, 3, 4, 0.30), {}, T60Formula::kSabine);
  for (int i = 0; i < scene::kNumBands; ++i) EXPECT_EQ(a.t60[i], 2.0 * b.t60[i]);
}

TEST(Reverb, MixingTimeFollowsLatestPath) {
  const SceneManifest m = Shoebox(6, 3, 4);
  const auto paths = ImageSources(m, Vec3(1, 1, 1), Vec3(4, 2, 3), 2);
  long latest = 0;
  for (const auto& p : paths) latest = std::max(latest, p.delay);
  EXPECT_DOUBLE_EQ(ReverbT60(m, paths).mixing_time, latest / 16000.0 + 0.005);
  SceneManifest bad = m;
  bad.shoebox->size = Vec3(0, 3, 4);
  EXPECT_THROW(ReverbT60(bad, {}), Error);
}

TEST(SynthesizeIr, DirectPathDelayAndGain) {
  const SceneManifest m = Shoebox(6, 3, 5, 1.0);  // fully absorbing: no tail
  PropagationPath p;
  p.length = 3.43;
  p.delay = std::lround(3.43 / 343.0 * 16000);
  ASSERT_EQ(p.delay, 160);
  p.arrival = {0.0, 0.0};
  const auto ir = SynthesizeIr({p}, ReverbT60(m, {p}), m);
  EXPECT_NEAR(ir.channel(foa::Channel::kW)[160], 1.0 / 3.43, 1e-15);
  EXPECT_NEAR(ir.channel(foa::Channel::kX)[160], 1.0 / 3.43, 1e-15);
  double rest = 0.0;
  for (size_t i = 0; i < ir.frames(); ++i) {
    if (i != 160) rest += std::abs(ir.channel(foa::Channel::kW)[i]);
  }
  EXPECT_EQ(rest, 0.0);

  p.length = 1.0;
  p.delay = 47;
  const auto unit = SynthesizeIr({p}, ReverbT60(m, {p}), m);
  EXPECT_DOUBLE_EQ(unit.channel(foa::Channel::kW)[47], 1.0);
}

TEST(SynthesizeIr, BandGainsShapeTheImpulse) {
  SceneManifest m = Shoebox(6, 3, 5, 1.0);
  PropagationPath p;
  p.length = 2.0;
  p.delay = 400;
  SurfaceHit h;
  h.absorption = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  p.hits.push_back(h);
  const auto ir = SynthesizeIr({p}, ReverbT60(m, {p}), m);
  const auto& w = ir.channel(foa::Channel::kW);
  // Sum of taps is the DC gain: band 0 passes DC.
  double dc = 0.0;
  for (double v : w) dc += v;
  EXPECT_NEAR(dc, 1.0 * 0.5, 1e-9);
}

TEST(SynthesizeIr, TailIsFiniteAndDecays) {
  SceneManifest m = Shoebox(6, 3, 5, 0.2);
  m.seed = 3;
  const auto paths = ImageSources(m, Vec3(1, 1, 1), Vec3(4, 2, 3), 2);
  const auto profile = ReverbT60(m, paths);
  const auto ir = SynthesizeIr(paths, profile, m);
  const double t60_max = *std::max_element(profile.t60.begin(), profile.t60.end());
  EXPECT_EQ(ir.frames(), static_cast<size_t>(std::ceil((profile.mixing_time + t60_max) * 16000)) + 1);
  auto window_energy = [&](size_t start) {
    double e = 0.0;
    for (size_t i = start; i < start + 160; ++i) {
      for (int c = 0; c < 4; ++c) e += std::pow(ir.channels()[c][i], 2);
    }
    return e;
  };
  for (const auto& c : ir.channels()) {
    for (double v : c) ASSERT_TRUE(std::isfinite(v));
  }
  const size_t start = static_cast<size_t>(std::lround(profile.mixing_time * 16000)) + 300;
  const double decay_db = 10 * std::log10(window_energy(ir.frames() - 160) / window_energy(start));
  EXPECT_LT(decay_db, -50.0);
}

TEST(SynthesizeIr, TailEnergyMatchesDiffuseModel) {
  ReverbProfile profile;
  profile.t60 = Filled(0.5);
  profile.mixing_time = 0.0;
  const Bands energy = Filled(2.0);
  const auto tail = LateTail(profile, energy, 16000, 9);
  double e = 0.0;
  for (double v : tail[0]) e += v * v;
  EXPECT_NEAR(e, 2.0, 0.2);
  double ex = 0.0;
  for (double v : tail[1]) ex += v * v;
  EXPECT_NEAR(ex, 2.0 / 3.0, 0.1);
}

class RenderTest : public ::testing::Test {
 protected:
  static SceneManifest Load(const std::string& name) { return scene::LoadManifest(Fixture(name)); }
};

TEST_F(RenderTest, AnechoicStaticSourceIsDelayedScaledEncoding) {
  const SceneManifest m = Load("anechoic_static.json");
  const auto out = RenderReference(m);
  ASSERT_EQ(out.frames(), 160000u);
  const Vec3 rel = m.sources[0].positions[0].p - m.listener.positions[0].p;
  const double d = rel.norm();
  const long delay = std::lround(d / 343.0 * 16000);
  const auto expected = foa::EncodeSource(m.sources[0].dry_signal, foa::Direction::FromVector(rel));
  for (int c = 0; c < 4; ++c) {
    for (size_t n = 0; n < out.frames(); ++n) {
      const double e = n >= static_cast<size_t>(delay) ? expected.channels()[c][n - delay] / d : 0.0;
      ASSERT_NEAR(out.channels()[c][n], e, 1e-9) << c << " " << n;
    }
  }
  const auto doa = foa::EstimateDoa(out, 1600);
  for (const auto& f : doa) {
    EXPECT_LT(foa::AngularDistance(f.direction, foa::Direction::FromVector(rel)), 1e-3);
  }
}

TEST_F(RenderTest, CrossingSourceAzimuthIsMonotone) {
  const SceneManifest m = Load("crossing_source.json");
  const auto out = RenderReference(m);
  const auto doa = foa::EstimateDoa(out, 8000);
  ASSERT_GT(doa.size(), 10u);
  for (size_t i = 1; i < doa.size(); ++i) {
    EXPECT_GT(doa[i].direction.azimuth, doa[i - 1].direction.azimuth) << i;
  }
  EXPECT_LT(doa.front().direction.azimuth, -0.3);
  EXPECT_GT(doa.back().direction.azimuth, 0.3);
}

TEST_F(RenderTest, DisjointSourcesSumToIndividualRenders) {
  SceneManifest both = Load("minimal_shoebox.json");
  scene::SourceTrack second = both.sources[0];
  second.id = "second";
  second.positions = {{0.0, Vec3(1.0, 2.0, 4.0)}, {10.0, Vec3(5.0, 1.0, 1.0)}};
  second.active = {{0.0, false}, {5.0, true}};
  both.sources[0].active = {{0.0, true}, {5.0, false}};
  both.sources.push_back(second);
  SceneManifest only_a = both, only_b = both;
  only_a.sources.pop_back();
  only_b.sources.erase(only_b.sources.begin());
  const auto sum = RenderReference(both);
  const auto a = RenderReference(only_a);
  const auto b = RenderReference(only_b);
  for (int c = 0; c < 4; ++c) {
    for (size_t n = 0; n < sum.frames(); ++n) {
      ASSERT_NEAR(sum.channels()[c][n], a.channels()[c][n] + b.channels()[c][n], 1e-9);
    }
  }
}

TEST_F(RenderTest, LinearInDrySignal) {
  SceneManifest m = Load("crossing_source.json");
  const auto base = RenderReference(m);
  for (double& v : m.sources[0].dry_signal) v *= -2.5;
  const auto scaled = RenderReference(m);
  for (int c = 0; c < 4; ++c) {
    for (size_t n = 0; n < base.frames(); ++n) {
      ASSERT_NEAR(scaled.channels()[c][n], -2.5 * base.channels()[c][n], 1e-9);
    }
  }
}

TEST_F(RenderTest, ParallelMatchesSerialAndIsThreadStable) {
  SceneManifest m = Load("minimal_shoebox.json");
  m.duration = 2.0;
  m.sources[0].positions = {{0.0, Vec3(4, 1.5, 1)}, {2.0, Vec3(4, 1.5, 4)}};
  m.sources[0].dry_signal.resize(m.frame_count());
  const auto serial = RenderReferenceSerial(m);
  parallel::SetThreads(1);
  const auto one = RenderReference(m);
  parallel::SetThreads(4);
  const auto four = RenderReference(m);
  parallel::SetThreads(1);
  EXPECT_TRUE(one == four);
  for (int c = 0; c < 4; ++c) {
    for (size_t n = 0; n < one.frames(); ++n) {
      ASSERT_NEAR(one.channels()[c][n], serial.channels()[c][n], 1e-12);
    }
  }
}

TEST_F(RenderTest, HeadRotationRotatesOutput) {
  SceneManifest m = Load("anechoic_static.json");
  const auto front = RenderReference(m);
  m.listener.orientations = {{0.0, foa::Rotation::FromYaw(0.5)}};
  const auto turned = RenderReference(m);
  const auto expected = foa::Rotate(front, foa::Rotation::FromYaw(0.5).Inverse());
  for (int c = 0; c < 4; ++c) {
    for (size_t n = 0; n < front.frames(); ++n) {
      ASSERT_NEAR(turned.channels()[c][n], expected.channels()[c][n], 1e-9);
    }
  }
}

TEST_F(RenderTest, DescriptorsOfStaticVisibleSource) {
  const SceneManifest m = Load("minimal_shoebox.json");
  const auto d = ComputeDescriptors(m);
  ASSERT_EQ(d.frames.size(), 100u);
  for (const auto& f : d.frames) {
    ASSERT_EQ(f.sources.size(), 1u);
    EXPECT_TRUE(f.sources[0].occlusion.visible);
    EXPECT_EQ(f.sources[0].direction.azimuth, d.frames[0].sources[0].direction.azimuth);
    EXPECT_EQ(f.sources[0].direction.elevation, d.frames[0].sources[0].direction.elevation);
    EXPECT_DOUBLE_EQ(f.sources[0].distance, 2.0);
    ASSERT_EQ(f.sources[0].reflections.size(), static_cast<size_t>(kTopReflections));
    EXPECT_TRUE(f.sources[0].reflections[0].valid);
  }
  EXPECT_NEAR(d.geometry.volume, 90.0, 1e-12);
}

TEST_F(RenderTest, PillarOcclusionDipsAndRecovers) {
  const SceneManifest m = Load("pillar_occlusion.json");
  const auto d = ComputeDescriptors(m);
  // Oracle: occluded iff the listener->source line crosses the pillar
  // footprint x in [3.8, 4.2], z in [2.8, 3.2].
  bool saw_occluded = false, recovered = false;
  for (const auto& f : d.frames) {
    const double zs = 1.0 + 4.0 * f.time / 10.0;
    const double z_at_front = 3.0 + (zs - 3.0) * (3.8 - 2.0) / 4.0;
    const double z_at_back = 3.0 + (zs - 3.0) * (4.2 - 2.0) / 4.0;
    const bool blocked = (z_at_front > 2.8 && z_at_front < 3.2) || (z_at_back > 2.8 && z_at_back < 3.2);
    const auto& s = f.sources[0];
    EXPECT_EQ(!s.occlusion.visible, blocked) << f.time;
    if (blocked) {
      saw_occluded = true;
      for (double t : s.occlusion.transmission) EXPECT_LT(t, 0.11);
    } else {
      if (saw_occluded) recovered = true;
      for (double t : s.occlusion.transmission) EXPECT_EQ(t, 1.0);
    }
  }
  EXPECT_TRUE(saw_occluded);
  EXPECT_TRUE(recovered);
}

TEST_F(RenderTest, DescriptorsAreDeterministicAndRoundTrip) {
  const SceneManifest m = Load("crossing_source.json");
  const std::string a = DescriptorsToJsonl(ComputeDescriptors(m));
  const std::string b = DescriptorsToJsonl(ComputeDescriptors(m));
  EXPECT_EQ(a, b);
  EXPECT_EQ(DescriptorsToJsonl(ComputeDescriptorsSerial(m)), a);
  EXPECT_EQ(DescriptorsToJsonl(DescriptorsFromJsonl(a)), a);
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 100);
}

}  // namespace
}  // namespace scenefoa::acoustics
