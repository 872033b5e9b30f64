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

#include "scenefoa/dataset/dataset.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "scenefoa/acoustics/descriptors.h"
#include "scenefoa/acoustics/render.h"
#include "scenefoa/core/error.h"
#include "scenefoa/core/parallel.h"
#include "scenefoa/core/random.h"
#include "scenefoa/foa/wav_io.h"
#include "scenefoa/io/wav.h"

namespace scenefoa::dataset {
namespace {

using nlohmann::json;
using scene::Vec3;
constexpr double kPi = std::numbers::pi;
constexpr std::array<const char*, 3> kSplitNames = {"train", "val", "test"};

constexpr double kWallMargin = 0.4;

bool Inside(const Vec3& p, const Vec3& room, double margin) {
  for (int k = 0; k < 3; ++k) {
    if (p[k] < margin || p[k] > room[k] - margin) return false;
  }
  return true;
}

double SegmentDistance(const Vec3& a, const Vec3& b, const Vec3& p) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  const double u = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + u * ab - p).norm();
}

scene::ProceduralSignal RandomSignal(Rng& rng, double amplitude) {
  scene::ProceduralSignal s;
  s.seed = rng.Next();
  s.amplitude = amplitude;
  switch (rng.UniformInt(0, 3)) {
    case 0:
      s.kind = scene::SignalKind::kTone;
      s.freq = rng.Uniform(200.0, 1500.0);
      break;
    case 1:
      s.kind = scene::SignalKind::kChirp;
      s.freq = rng.Uniform(150.0, 800.0);
      s.freq_end = rng.Uniform(1500.0, 5000.0);
      break;
    case 2:
      s.kind = scene::SignalKind::kNoiseBurst;
      s.burst_s = rng.Uniform(0.1, 0.5);
      s.gap_s = rng.Uniform(0.05, 0.4);
      s.band_lo = rng.Uniform(100.0, 600.0);
      s.band_hi = rng.Uniform(2000.0, 6000.0);
      break;
    default:
      s.kind = scene::SignalKind::kNoise;
      s.band_lo = rng.Uniform(100.0, 600.0);
      s.band_hi = rng.Uniform(2000.0, 6000.0);
      break;
  }
  return s;
}

// Point at distance r from the listener in a random horizontal direction,
// kept inside the room.
Vec3 PlaceAround(Rng& rng, const Vec3& listener, const Vec3& room, double r_lo, double r_hi) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const double az = rng.Uniform(-kPi, kPi);
    const double r = rng.Uniform(r_lo, r_hi);
    const Vec3 p = listener + Vec3(r * std::cos(az), rng.Uniform(-0.5, 0.8), r * std::sin(az));
    if (Inside(p, room, kWallMargin)) return p;
  }
  throw Error(ErrorCode::kInvalidGeometry, "could not place a source inside the room");
}

scene::Surface Triangle(const Vec3& a, const Vec3& b, const Vec3& c, scene::SemanticClass cls,
                        const std::optional<scene::MaterialBands>& inline_material) {
  scene::Surface s;
  s.vertices = {a, b, c};
  s.semantic_class = cls;
  if (inline_material) {
    s.material = *inline_material;
    s.material_ref = "@inline";
  } else {
    s.material = scene::AssignMaterial(cls);
  }
  return s;
}

void AddBox(std::vector<scene::Surface>& out, const Vec3& lo, const Vec3& hi, scene::SemanticClass cls,
            const std::optional<scene::MaterialBands>& mat) {
  auto corner = [&](int i) { return Vec3(i & 1 ? hi.x() : lo.x(), i & 2 ? hi.y() : lo.y(), i & 4 ? hi.z() : lo.z()); };
  static constexpr std::array<std::array<int, 4>, 6> kFaces = {
      {{0, 2, 6, 4}, {1, 5, 7, 3}, {0, 4, 5, 1}, {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 6, 7, 5}}};
  for (const auto& f : kFaces) {
    out.push_back(Triangle(corner(f[0]), corner(f[1]), corner(f[2]), cls, mat));
    out.push_back(Triangle(corner(f[0]), corner(f[2]), corner(f[3]), cls, mat));
  }
}

void AddSphere(std::vector<scene::Surface>& out, const Vec3& center, double radius, scene::SemanticClass cls,
               const std::optional<scene::MaterialBands>& mat) {
  // Icosahedron circumscribed by the sphere.
  const double g = (1.0 + std::sqrt(5.0)) / 2.0;
  std::array<Vec3, 12> v = {Vec3(-1, g, 0), Vec3(1, g, 0),   Vec3(-1, -g, 0), Vec3(1, -g, 0),
                            Vec3(0, -1, g), Vec3(0, 1, g),   Vec3(0, -1, -g), Vec3(0, 1, -g),
                            Vec3(g, 0, -1), Vec3(g, 0, 1),   Vec3(-g, 0, -1), Vec3(-g, 0, 1)};
  for (auto& p : v) p = center + radius * p.normalized();
  static constexpr std::array<std::array<int, 3>, 20> kFaces = {
      {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
       {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
       {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}}};
  for (const auto& f : kFaces) out.push_back(Triangle(v[f[0]], v[f[1]], v[f[2]], cls, mat));
}

// Box or sphere occluder between the listener and a source, or at random.
void AddOccluder(Rng& rng, scene::SceneManifest& m, const Vec3& room, const Vec3& listener,
                 const std::vector<Vec3>& keep_clear) {
  static constexpr std::array<scene::SemanticClass, 4> kClasses = {
      scene::SemanticClass::kFurniture, scene::SemanticClass::kGlass, scene::SemanticClass::kCurtain,
      scene::SemanticClass::kPerson};
  const auto cls = kClasses[rng.UniformInt(0, 3)];
  std::optional<scene::MaterialBands> mat;
  if (rng.Uniform() < 0.3) {
    scene::MaterialBands b;
    const double base = rng.Uniform(0.05, 0.9);
    for (int k = 0; k < scene::kNumBands; ++k) {
      b.absorption[k] = std::clamp(base + rng.Uniform(-0.05, 0.05), 0.01, 0.99);
      b.scattering[k] = 0.2;
    }
    mat = b;
  }
  const bool sphere = rng.Uniform() < 0.5;
  for (int attempt = 0; attempt < 200; ++attempt) {
    Vec3 center;
    if (!keep_clear.empty() && rng.Uniform() < 0.6) {
      const Vec3& src = keep_clear[rng.UniformInt(0, static_cast<int>(keep_clear.size()) - 1)];
      center = 0.5 * (listener + src) + Vec3(rng.Uniform(-0.2, 0.2), 0.0, rng.Uniform(-0.2, 0.2));
    } else {
      center = Vec3(rng.Uniform(0.8, room.x() - 0.8), 1.0, rng.Uniform(0.8, room.z() - 0.8));
    }
    const double size = rng.Uniform(0.2, 0.45);
    double clearance = size * std::sqrt(3.0) + 0.25;
    if (sphere) center.y() = std::clamp(center.y(), size + 0.1, room.y() - size - 0.1);
    auto too_close = [&](const Vec3& p) {
      const Vec3 d = p - center;
      return sphere ? d.norm() < clearance : std::hypot(d.x(), d.z()) < clearance;
    };
    if (too_close(listener) ||
        std::any_of(keep_clear.begin(), keep_clear.end(), [&](const Vec3& p) { return too_close(p); })) {
      continue;
    }
    if (center.x() - size < 0.1 || center.z() - size < 0.1 || center.x() + size > room.x() - 0.1 ||
        center.z() + size > room.z() - 0.1) {
      continue;
    }
    if (sphere) {
      AddSphere(m.surfaces, center, size, cls, mat);
    } else {
      const double height = rng.Uniform(0.6, std::min(2.2, room.y() - 0.2));
      AddBox(m.surfaces, Vec3(center.x() - size, 0.0, center.z() - size),
             Vec3(center.x() + size, height, center.z() + size), cls, mat);
    }
    return;
  }
}

}  // namespace

std::string_view PresetName(Preset p) {
  switch (p) {
    case Preset::kGeometry: return "geometry";
    case Preset::kMoveSource: return "movesource";
    case Preset::kMultiSource: return "multisource";
  }
  return "geometry";
}

Preset ParsePreset(std::string_view name) {
  for (auto p : {Preset::kGeometry, Preset::kMoveSource, Preset::kMultiSource}) {
    if (PresetName(p) == name) return p;
  }
  throw Error(ErrorCode::kOutOfRange, "unknown preset '" + std::string(name) + "'");
}

std::vector<const DatasetScene*> DatasetManifest::Split(std::string_view name) const {
  std::vector<const DatasetScene*> out;
  for (const auto& s : scenes) {
    if (name.empty() || s.split == name) out.push_back(&s);
  }
  return out;
}

json ToJson(const DatasetManifest& d) {
  json scenes = json::array();
  for (const auto& s : d.scenes) {
    scenes.push_back({{"id", s.id}, {"path", s.path}, {"seed", s.seed}, {"split", s.split}});
  }
  return {{"preset", PresetName(d.preset)},
          {"seed", d.seed},
          {"duration_s", d.duration},
          {"split", {{"train", d.split[0]}, {"val", d.split[1]}, {"test", d.split[2]}}},
          {"scenes", scenes}};
}

DatasetManifest DatasetFromJson(const json& j, const fs::path& dir) {
  DatasetManifest d;
  try {
    d.preset = ParsePreset(j.at("preset").get<std::string>());
    d.seed = j.at("seed").get<uint64_t>();
    d.duration = j.value("duration_s", kSceneDuration);
    for (int k = 0; k < 3; ++k) d.split[k] = j.at("split").at(kSplitNames[k]).get<double>();
    for (const auto& s : j.at("scenes")) {
      d.scenes.push_back({s.at("id").get<std::string>(), s.at("path").get<std::string>(),
                          s.at("seed").get<uint64_t>(), s.value("split", std::string("train"))});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kManifestSyntax, std::string("dataset manifest: ") + e.what());
  }
  d.dir = dir;
  return d;
}

void ValidateDataset(const DatasetManifest& d) {
  std::vector<std::string> violations;
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (d.split[k] < 0.0) violations.push_back(std::string("split.") + kSplitNames[k] + " is negative");
    sum += d.split[k];
  }
  if (std::abs(sum - 1.0) > 1e-9) violations.push_back("split fractions sum to " + std::to_string(sum));
  std::set<uint64_t> seeds;
  std::set<std::string> ids;
  for (size_t i = 0; i < d.scenes.size(); ++i) {
    const auto& s = d.scenes[i];
    const std::string where = "scenes[" + std::to_string(i) + "]";
    if (!seeds.insert(s.seed).second) violations.push_back(where + ".seed duplicates an earlier scene");
    if (!ids.insert(s.id).second) violations.push_back(where + ".id duplicates an earlier scene");
    if (std::find(kSplitNames.begin(), kSplitNames.end(), s.split) == kSplitNames.end()) {
      violations.push_back(where + ".split '" + s.split + "' is not train/val/test");
    }
  }
  if (!violations.empty()) throw ManifestInvalidError(violations);
}

DatasetManifest LoadDataset(const fs::path& dir) {
  const fs::path path = dir / kDatasetFile;
  if (!fs::exists(path)) throw Error(ErrorCode::kNotFound, path.string() + " does not exist");
  json j;
  try {
    j = json::parse(io::ReadFile(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kManifestSyntax, path.string() + ": " + e.what());
  }
  auto d = DatasetFromJson(j, dir);
  ValidateDataset(d);
  return d;
}

scene::SceneManifest SynthesizeScene(Preset preset, uint64_t seed, double duration) {
  Rng rng(seed, "scene");
  scene::SceneManifest m;
  m.duration = duration;
  m.seed = seed;
  scene::Shoebox box;
  box.size = Vec3(rng.Uniform(5.0, 9.0), rng.Uniform(2.6, 3.6), rng.Uniform(4.0, 8.0));
  static constexpr std::array<const char*, 5> kWallMaterials = {"wall", "wall", "curtain", "glass", "wall"};
  for (int f : {0, 1, 4, 5}) box.faces[f] = kWallMaterials[rng.UniformInt(0, 4)];
  m.shoebox = box;
  m.surfaces = scene::ShoeboxSurfaces(box, m.materials);
  const Vec3& room = box.size;

  const Vec3 listener(rng.Uniform(1.5, room.x() - 1.5), rng.Uniform(1.2, 1.7), rng.Uniform(1.5, room.z() - 1.5));
  m.listener.positions = {{0.0, listener}};
  scene::OrientationKey key;
  key.q = foa::Rotation::FromYaw(rng.Uniform(-kPi, kPi));
  m.listener.orientations = {key};

  auto add_static = [&](const std::string& id, double amplitude) {
    scene::SourceTrack s;
    s.id = id;
    s.procedural = RandomSignal(rng, amplitude);
    s.positions = {{0.0, PlaceAround(rng, listener, room, 1.0, 3.5)}};
    m.sources.push_back(std::move(s));
  };

  switch (preset) {
    case Preset::kGeometry: {
      add_static("src0", 0.2);
      std::vector<Vec3> clear = {m.sources[0].positions[0].p};
      const int occluders = rng.UniformInt(1, 3);
      for (int i = 0; i < occluders; ++i) AddOccluder(rng, m, room, listener, clear);
      break;
    }
    case Preset::kMoveSource: {
      scene::SourceTrack s;
      s.id = "src0";
      s.procedural = RandomSignal(rng, 0.2);
      for (int attempt = 0;; ++attempt) {
        if (attempt > 1000) throw Error(ErrorCode::kInvalidGeometry, "could not fit a trajectory");
        std::vector<scene::PositionKey> keys;
        if (rng.Uniform() < 0.5) {
          const Vec3 a = PlaceAround(rng, listener, room, 1.0, 3.0);
          const double heading = rng.Uniform(-kPi, kPi);
          const double length = rng.Uniform(1.5, 4.5);
          const Vec3 b = a + length * Vec3(std::cos(heading), 0.0, std::sin(heading));
          keys = {{0.0, a}, {duration, b}};
        } else {
          const double r = rng.Uniform(1.2, 2.5);
          const double a0 = rng.Uniform(-kPi, kPi);
          const double span = rng.Uniform(kPi / 3, kPi) * (rng.Uniform() < 0.5 ? -1.0 : 1.0);
          const double dy = rng.Uniform(-0.3, 0.6);
          constexpr int kKeys = 11;
          for (int i = 0; i < kKeys; ++i) {
            const double u = static_cast<double>(i) / (kKeys - 1);
            const double az = a0 + span * u;
            keys.push_back({duration * u, listener + Vec3(r * std::cos(az), dy, r * std::sin(az))});
          }
        }
        bool ok = true;
        for (size_t i = 0; i < keys.size() && ok; ++i) {
          ok = Inside(keys[i].p, room, kWallMargin);
          if (ok && i > 0) ok = SegmentDistance(keys[i - 1].p, keys[i].p, listener) > 0.6;
        }
        if (!ok) continue;
        double span = 0.0;
        for (const auto& ka : keys) {
          for (const auto& kb : keys) span = std::max(span, (ka.p - kb.p).norm());
        }
        if (span < 1.0) continue;
        s.positions = std::move(keys);
        break;
      }
      m.sources.push_back(std::move(s));
      break;
    }
    case Preset::kMultiSource: {
      const int n = rng.UniformInt(2, 4);
      for (int i = 0; i < n; ++i) add_static("src" + std::to_string(i), 0.15);
      break;
    }
  }
  scene::LoadDrySignals(m);
  const auto violations = scene::Validate(m);
  if (!violations.empty()) throw ManifestInvalidError(violations);
  return m;
}

DatasetManifest Generate(Preset preset, int count, uint64_t seed, const fs::path& root, double duration) {
  if (count < 1) throw Error(ErrorCode::kOutOfRange, "scene count must be >= 1");
  DatasetManifest d;
  d.preset = preset;
  d.seed = seed;
  d.duration = duration;
  d.dir = root / std::string(PresetName(preset));
  fs::create_directories(d.dir);

  std::vector<int> order(count);
  for (int i = 0; i < count; ++i) order[i] = i;
  Rng split_rng(seed, "split");
  for (int i = count - 1; i > 0; --i) std::swap(order[i], order[split_rng.UniformInt(0, i)]);
  const int n_train = static_cast<int>(std::lround(d.split[0] * count));
  const int n_val = std::min(count - n_train, static_cast<int>(std::lround(d.split[1] * count)));
  std::vector<std::string> split(count);
  for (int rank = 0; rank < count; ++rank) {
    split[order[rank]] = rank < n_train ? "train" : rank < n_train + n_val ? "val" : "test";
  }

  std::set<uint64_t> used;
  for (int i = 0; i < count; ++i) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s_%04d", std::string(PresetName(preset)).c_str(), i);
    uint64_t scene_seed = DeriveSeed(seed, std::string(PresetName(preset)) + "/" + std::to_string(i));
    while (!used.insert(scene_seed).second) scene_seed = DeriveSeed(scene_seed, "retry");
    const auto m = SynthesizeScene(preset, scene_seed, duration);
    fs::create_directories(d.dir / id);
    scene::SaveManifest(d.dir / id / "scene.json", m);
    d.scenes.push_back({id, std::string(id) + "/scene.json", scene_seed, split[i]});
  }
  ValidateDataset(d);
  io::WriteFileAtomic(d.dir / kDatasetFile, ToJson(d).dump(2) + "\n");
  return d;
}

MaterializeReport Materialize(const DatasetManifest& d) {
  ValidateDataset(d);
  const int n = static_cast<int>(d.scenes.size());
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(parallel::Threads())
  for (int i = 0; i < n; ++i) {
    const auto& s = d.scenes[i];
    const fs::path scene_path = d.dir / s.path;
    try {
      const auto m = scene::LoadManifest(scene_path);
      const auto clip = acoustics::RenderReference(m);
      foa::WriteFoaWav(scene_path.parent_path() / "ref.wav", clip);
      acoustics::WriteDescriptors(scene_path.parent_path() / "descriptors.jsonl", acoustics::ComputeDescriptors(m));
    } catch (const std::exception& e) {
      errors[i] = e.what();
      spdlog::error("materialize {}: {}", s.id, e.what());
    }
  }
  MaterializeReport report;
  for (int i = 0; i < n; ++i) {
    if (errors[i].empty()) {
      ++report.rendered;
    } else {
      report.failed.push_back(d.scenes[i].id + ": " + errors[i]);
    }
  }
  const json status = {{"complete", !report.partial()}, {"rendered", report.rendered}, {"failed", report.failed}};
  io::WriteFileAtomic(d.dir / "materialize.json", status.dump(2) + "\n");
  return report;
}

std::vector<CorpusPair> MaterializedScenes(const DatasetManifest& d, std::string_view split) {
  std::vector<CorpusPair> out;
  for (const auto* s : d.Split(split)) {
    const fs::path dir = (d.dir / s->path).parent_path();
    if (fs::exists(dir / "ref.wav") && fs::exists(dir / "descriptors.jsonl")) out.push_back({s->id, dir});
  }
  return out;
}

}  // namespace scenefoa::dataset
