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

#ifndef SCENEFOA_SCENE_MANIFEST_H_
#define SCENEFOA_SCENE_MANIFEST_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenefoa/foa/types.h"
#include "scenefoa/scene/materials.h"
#include "scenefoa/scene/signals.h"

namespace scenefoa::scene {

using foa::Vec3;

struct Surface {
  std::array<Vec3, 3> vertices;
  SemanticClass semantic_class = SemanticClass::kOther;
  MaterialBands material;
  // How the material was given: "" = class default, "@inline" = inline bands,
  // otherwise a key of SceneManifest::materials.
  std::string material_ref;
  bool from_shoebox = false;

  double Area() const;
  Vec3 Normal() const;  // unit, right-hand winding
};

struct PositionKey {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
};

struct ActivityKey {
  double t = 0.0;
  bool on = true;
};

struct OrientationKey {
  double t = 0.0;
  foa::Rotation q;
  double given_norm = 1.0;  // quaternion norm as written in the manifest
};

struct SourceTrack {
  std::string id;
  // Exactly one of signal_path / procedural describes the dry signal.
  std::string signal_path;
  std::optional<ProceduralSignal> procedural;
  std::vector<double> dry_signal;
  std::vector<PositionKey> positions;
  std::vector<ActivityKey> active;  // empty = always active
};

struct ListenerTrack {
  std::vector<PositionKey> positions;
  std::vector<OrientationKey> orientations;  // empty = identity
};

enum class ShoeboxFace { kXMin, kXMax, kYMin, kYMax, kZMin, kZMax };
inline constexpr std::array<const char*, 6> kShoeboxFaceNames = {"x_min", "x_max", "y_min",
                                                                 "y_max", "z_min", "z_max"};

// Axis-aligned room [0, Lx] x [0, Ly] x [0, Lz], y up.
struct Shoebox {
  Vec3 size = Vec3::Zero();
  // Material name or semantic class per face, indexed by ShoeboxFace.
  std::array<std::string, 6> faces = {"wall", "wall", "floor", "ceiling", "wall", "wall"};
};

struct SceneManifest {
  int sample_rate = foa::kDefaultSampleRate;
  double duration = 10.0;
  double speed_of_sound = 343.0;
  Bands air_attenuation{};  // nepers per metre
  uint64_t seed = 0;
  std::optional<Shoebox> shoebox;
  std::optional<double> room_volume;
  std::map<std::string, MaterialBands> materials;
  // Shoebox triangles first (12 of them when a shoebox is declared), then the
  // explicit surfaces in file order.
  std::vector<Surface> surfaces;
  std::vector<SourceTrack> sources;
  ListenerTrack listener;
  std::filesystem::path base_dir;

  size_t frame_count() const;
  size_t shoebox_surface_count() const { return shoebox ? 12 : 0; }
  // Shoebox volume, else the declared volume, else the enclosed mesh volume.
  double RoomVolume() const;
  double TotalArea() const;
};

// Shoebox triangles with normals facing the room interior.
std::vector<Surface> ShoeboxSurfaces(const Shoebox& box,
                                     const std::map<std::string, MaterialBands>& materials);

// JSON <-> manifest. FromJson throws kManifestSyntax on structural problems;
// it does not check invariants and does not read dry signals.
SceneManifest FromJson(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
nlohmann::json ToJson(const SceneManifest& m);

// Every invariant violation, with JSON-pointer-style locations.
std::vector<std::string> Validate(const SceneManifest& m);

// Parse + validate + load dry signals. Throws kManifestSyntax or
// ManifestInvalidError.
SceneManifest LoadManifest(const std::filesystem::path& path);
SceneManifest LoadManifestFromString(const std::string& text,
                                     const std::filesystem::path& base_dir = {});
// Fills dry_signal for every source from its WAV file or generator.
void LoadDrySignals(SceneManifest& m);

void SaveManifest(const std::filesystem::path& path, const SceneManifest& m);

}  // namespace scenefoa::scene

#endif  // SCENEFOA_SCENE_MANIFEST_H_
