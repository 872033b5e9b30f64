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

#ifndef SCENEFOA_DATASET_DATASET_H_
#define SCENEFOA_DATASET_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scenefoa/scene/manifest.h"

namespace scenefoa::dataset {

namespace fs = std::filesystem;

enum class Preset { kGeometry, kMoveSource, kMultiSource };

std::string_view PresetName(Preset p);  // "geometry", "movesource", "multisource"
Preset ParsePreset(std::string_view name);  // throws kOutOfRange

inline constexpr double kSceneDuration = 10.0;
inline constexpr char kDatasetFile[] = "dataset.json";

struct DatasetScene {
  std::string id;
  std::string path;  // scene.json, relative to the dataset directory
  uint64_t seed = 0;
  std::string split;  // "train", "val" or "test"
};

struct DatasetManifest {
  Preset preset = Preset::kGeometry;
  uint64_t seed = 0;
  double duration = kSceneDuration;
  std::array<double, 3> split{0.8, 0.1, 0.1};  // train, val, test
  std::vector<DatasetScene> scenes;
  fs::path dir;  // directory holding dataset.json; not serialized

  std::vector<const DatasetScene*> Split(std::string_view name) const;
};

nlohmann::json ToJson(const DatasetManifest& d);
DatasetManifest DatasetFromJson(const nlohmann::json& j, const fs::path& dir);
// Throws kManifestInvalid listing every violation (split sum, duplicate seeds).
void ValidateDataset(const DatasetManifest& d);
DatasetManifest LoadDataset(const fs::path& dir);

// One randomized scene of the preset, fully determined by `seed`.
scene::SceneManifest SynthesizeScene(Preset preset, uint64_t seed, double duration = kSceneDuration);

// Writes <root>/<preset>/<scene_id>/scene.json and <root>/<preset>/dataset.json.
DatasetManifest Generate(Preset preset, int count, uint64_t seed, const fs::path& root,
                         double duration = kSceneDuration);

struct MaterializeReport {
  int rendered = 0;
  std::vector<std::string> failed;  // "scene_id: reason"
  bool partial() const { return !failed.empty(); }
};

// Renders ref.wav (4-channel 16-bit PCM) and descriptors.jsonl next to every
// scene.json, scenes in parallel. Failures are logged and recorded in
// <dataset>/materialize.json instead of aborting.
MaterializeReport Materialize(const DatasetManifest& d);

struct CorpusPair {
  std::string id;
  fs::path scene_dir;
};

// Scene directories of a split that hold both ref.wav and descriptors.jsonl.
std::vector<CorpusPair> MaterializedScenes(const DatasetManifest& d, std::string_view split = "");

}  // namespace scenefoa::dataset

#endif  // SCENEFOA_DATASET_DATASET_H_
