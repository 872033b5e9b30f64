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

#include <cmath>
#include <filesystem>
#include <numbers>

#include "scenefoa/core/error.h"
#include "scenefoa/core/random.h"
#include "scenefoa/io/wav.h"
#include "scenefoa/scene/depth.h"
#include "scenefoa/scene/manifest.h"
#include "scenefoa/scene/materials.h"
#include "scenefoa/scene/tracks.h"

namespace scenefoa::scene {
namespace {

constexpr double kPi = std::numbers::pi;

std::filesystem::path Fixture(const std::string& name) {
  return std::filesystem::path(SCENEFOA_SOURCE_DIR) / "fixtures" / "scenes" / name;
}

std::vector<std::string> ViolationsOf(const std::filesystem::path& path) {
  try {
    LoadManifest(path);
  } catch (const ManifestInvalidError& e) {
    return e.violations();
  }
  return {};
}

TEST(Materials, GlassAbsorptionRisesWithFrequency) {
  const MaterialBands glass = AssignMaterial("glass");
  for (int b = 1; b < kNumBands; ++b) EXPECT_GE(glass.absorption[b], glass.absorption[b - 1]);
  EXPECT_LT(glass.absorption[0], glass.absorption[kNumBands - 1]);
}

TEST(Materials, OtherIsFlatTenPercent) {
  for (double a : AssignMaterial("other").absorption) EXPECT_DOUBLE_EQ(a, 0.1);
  EXPECT_EQ(AssignMaterial("unheard-of-label"), AssignMaterial("other"));
}

TEST(Materials, LookupIsDeterministic) {
  EXPECT_EQ(AssignMaterial("curtain"), AssignMaterial("curtain"));
}

TEST(Materials, ShippedTableMatchesBuiltIn) {
  const auto table =
      LoadMaterialTable(std::filesystem::path(SCENEFOA_SOURCE_DIR) / "materials/default_table.json");
  ASSERT_EQ(table.size(), 8u);
  for (const auto& [name, bands] : table) {
    EXPECT_EQ(bands, AssignMaterial(name)) << name;
    for (int b = 0; b < kNumBands; ++b) {
      EXPECT_GE(bands.absorption[b], 0.0);
      EXPECT_LE(bands.absorption[b], 1.0);
    }
  }
}

TEST(Manifest, MinimalShoeboxHasTwelveSurfaces) {
  const SceneManifest m = LoadManifest(Fixture("minimal_shoebox.json"));
  EXPECT_EQ(m.surfaces.size(), 12u);
  EXPECT_DOUBLE_EQ(m.RoomVolume(), 6.0 * 3.0 * 5.0);
  EXPECT_NEAR(m.TotalArea(), 2 * (6 * 3 + 6 * 5 + 3 * 5), 1e-9);
  ASSERT_EQ(m.sources.size(), 1u);
  EXPECT_EQ(m.sources[0].dry_signal.size(), 160000u);
}

TEST(Manifest, ShoeboxNormalsPointInward) {
  const SceneManifest m = LoadManifest(Fixture("minimal_shoebox.json"));
  const Vec3 centre(3.0, 1.5, 2.5);
  for (const auto& s : m.surfaces) {
    EXPECT_GT(s.Normal().dot(centre - s.vertices[0]), 0.0);
  }
}

TEST(Manifest, MeshVolumeMatchesShoebox) {
  SceneManifest m = LoadManifest(Fixture("minimal_shoebox.json"));
  m.shoebox.reset();
  EXPECT_NEAR(m.RoomVolume(), 90.0, 1e-9);
}

TEST(Manifest, AbsorptionAboveOneIsReportedWithPath) {
  const auto v = ViolationsOf(Fixture("invalid_absorption.json"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "surfaces[3].material.absorption[2] out of [0,1]");
}

TEST(Manifest, NonIncreasingListenerTimesAreRejected) {
  const auto v = ViolationsOf(Fixture("invalid_listener_time.json"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], "listener.positions[2].t not strictly increasing");
}

TEST(Manifest, MalformedJsonIsSyntaxError) {
  try {
    LoadManifestFromString("{\"sources\": [");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kManifestSyntax);
  }
  try {
    LoadManifestFromString("{\"listener\": {\"positions\": []}}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kManifestSyntax);
  }
}

TEST(Manifest, MaterialReferencesResolve) {
  const SceneManifest m = LoadManifest(Fixture("shoebox_with_furniture.json"));
  ASSERT_EQ(m.surfaces.size(), 16u);
  EXPECT_EQ(m.surfaces[12].material, AssignMaterial("furniture"));
  EXPECT_DOUBLE_EQ(m.surfaces[13].material.absorption[3], 0.4);
  EXPECT_EQ(m.surfaces[14].material, AssignMaterial("glass"));
  EXPECT_DOUBLE_EQ(m.surfaces[15].material.absorption[0], 0.2);
}

TEST(Manifest, CollectsEveryViolation) {
  nlohmann::json doc = ToJson(LoadManifest(Fixture("minimal_shoebox.json")));
  doc["air_attenuation_bands"][0] = -0.1;
  doc["surfaces"] = {{{"vertices", {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}}}};
  doc["sources"][0]["positions"][0]["t"] = 11.0;
  doc["listener"]["orientations"] = {{{"t", 0.0}, {"q", {1.0, 1.0, 0.0, 0.0}}}};
  const auto v = Validate(FromJson(doc));
  EXPECT_EQ(v.size(), 4u);
}

TEST(Manifest, UnknownMaterialNameIsInvalid) {
  nlohmann::json doc = ToJson(LoadManifest(Fixture("minimal_shoebox.json")));
  doc["shoebox"]["faces"]["z_max"] = "marble";
  const auto v = Validate(FromJson(doc));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("shoebox.faces.z_max"), std::string::npos);
}

TEST(Manifest, WavDrySignalLengthIsChecked) {
  const auto dir = std::filesystem::temp_directory_path() / "scenefoa_scene_test";
  std::filesystem::create_directories(dir);
  io::WavData wav;
  wav.sample_rate = 16000;
  wav.format = io::SampleFormat::kFloat32;
  wav.channels = {std::vector<double>(160001, 0.1)};
  io::WriteWav(dir / "ok.wav", wav);
  wav.channels = {std::vector<double>(150000, 0.1)};
  io::WriteWav(dir / "short.wav", wav);

  nlohmann::json doc = ToJson(LoadManifest(Fixture("minimal_shoebox.json")));
  doc["sources"][0]["signal"] = "ok.wav";
  const SceneManifest m = LoadManifestFromString(doc.dump(), dir);
  EXPECT_EQ(m.sources[0].dry_signal.size(), 160000u);

  doc["sources"][0]["signal"] = "short.wav";
  EXPECT_THROW(LoadManifestFromString(doc.dump(), dir), ManifestInvalidError);
  doc["sources"][0]["signal"] = "missing.wav";
  EXPECT_THROW(LoadManifestFromString(doc.dump(), dir), ManifestInvalidError);
  std::filesystem::remove_all(dir);
}

TEST(Manifest, SerializeLoadIsFixedPoint) {
  for (const char* name : {"minimal_shoebox.json", "shoebox_with_furniture.json",
                           "anechoic_static.json", "crossing_source.json"}) {
    const SceneManifest a = LoadManifest(Fixture(name));
    const std::string first = ToJson(a).dump();
    const SceneManifest b = LoadManifestFromString(first);
    EXPECT_EQ(ToJson(b).dump(), first) << name;
  }
}

TEST(Tracks, MidpointInterpolation) {
  SceneManifest m = LoadManifest(Fixture("minimal_shoebox.json"));
  m.sources[0].positions = {{0.0, Vec3(0, 0, 0)}, {10.0, Vec3(10, 0, 0)}};
  const SceneState s = SampleTracks(m, 5.0);
  EXPECT_TRUE(s.sources[0].position.isApprox(Vec3(5, 0, 0)));
}

TEST(Tracks, KeyframeTimesAreExact) {
  std::vector<PositionKey> keys = {{0.0, Vec3(1, 2, 3)}, {2.5, Vec3(-4, 0.5, 7)}, {9.0, Vec3(0, 0, 0)}};
  for (const auto& k : keys) EXPECT_EQ(InterpolatePosition(keys, k.t), k.p);
}

TEST(Tracks, SlerpOfEqualKeysIsConstant) {
  Rng rng(5);
  const auto q = foa::Rotation::FromQuaternionNormalized(rng.Normal(), rng.Normal(), rng.Normal(),
                                                         rng.Normal());
  const std::vector<OrientationKey> keys = {{0.0, q}, {10.0, q}};
  for (double t : {0.0, 1.3, 5.0, 9.99, 10.0}) {
    const auto r = InterpolateOrientation(keys, t).Wxyz();
    const auto e = q.Wxyz();
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(r[i], e[i], 1e-12);
  }
}

TEST(Tracks, ActivityIsZeroOrderHold) {
  const std::vector<ActivityKey> keys = {{0.0, true}, {2.0, false}, {4.0, true}};
  EXPECT_TRUE(InterpolateActivity(keys, 1.99));
  EXPECT_FALSE(InterpolateActivity(keys, 2.0));
  EXPECT_FALSE(InterpolateActivity(keys, 3.5));
  EXPECT_TRUE(InterpolateActivity(keys, 10.0));
  EXPECT_TRUE(InterpolateActivity({}, 3.0));
}

TEST(Tracks, OutOfRangeTimeThrows) {
  const SceneManifest m = LoadManifest(Fixture("minimal_shoebox.json"));
  EXPECT_THROW(SampleTracks(m, -0.01), Error);
  EXPECT_THROW(SampleTracks(m, 10.01), Error);
  EXPECT_NO_THROW(SampleTracks(m, 10.0));
}

TEST(Tracks, PositionsAreLipschitzInTime) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PositionKey> keys;
    double t = 0.0;
    for (int k = 0; k < 6; ++k) {
      keys.push_back({t, Vec3(rng.Normal(), rng.Normal(), rng.Normal())});
      t += rng.Uniform(0.1, 2.0);
    }
    double max_speed = 0.0;
    for (size_t k = 1; k < keys.size(); ++k) {
      max_speed = std::max(max_speed, (keys[k].p - keys[k - 1].p).norm() / (keys[k].t - keys[k - 1].t));
    }
    for (int s = 0; s < 200; ++s) {
      const double t0 = rng.Uniform(0.0, t);
      const double eps = 1e-4;
      const double step = (InterpolatePosition(keys, t0 + eps) - InterpolatePosition(keys, t0)).norm();
      EXPECT_LE(step, max_speed * eps * (1 + 1e-9) + 1e-15);
    }
  }
}

TEST(Depth, ForwardPixel) {
  DepthMap dm{1, 1, {2.0}};
  const auto p = BackProject(dm);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR((p[0] - Vec3(2, 0, 0)).norm(), 0.0, 1e-12);
}

TEST(Depth, ZenithDirection) {
  // The top row of a tall map approaches the zenith; check the exact mapping.
  const Vec3 up = foa::Direction{kPi / 2, 0.0}.UnitVector();
  EXPECT_NEAR((up - Vec3(0, 1, 0)).norm(), 0.0, 1e-15);
  DepthMap dm{4, 2, std::vector<double>(8, 1.0)};
  const auto d = dm.PixelDirection(0, 0);
  EXPECT_NEAR(d.elevation, kPi / 4, 1e-15);
  EXPECT_NEAR(d.azimuth, -kPi + kPi / 4, 1e-15);
}

TEST(Depth, InvalidPixelsSkippedAndAllInvalidThrows) {
  DepthMap dm{2, 2, {1.0, 0.0, -1.0, 3.0}};
  EXPECT_EQ(BackProject(dm).size(), 2u);
  DepthMap empty{2, 1, {0.0, -2.0}};
  try {
    BackProject(empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDepthMap);
  }
}

TEST(Depth, NormsEqualDepthOnRandomMaps) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    DepthMap dm;
    dm.width = rng.UniformInt(1, 64);
    dm.height = rng.UniformInt(1, 32);
    for (int i = 0; i < dm.width * dm.height; ++i) dm.depth.push_back(rng.Uniform(0.01, 50.0));
    const auto pts = BackProject(dm);
    ASSERT_EQ(pts.size(), dm.depth.size());
    for (size_t i = 0; i < pts.size(); ++i) EXPECT_NEAR(pts[i].norm(), dm.depth[i], 1e-9);
  }
}

}  // namespace
}  // namespace scenefoa::scene
