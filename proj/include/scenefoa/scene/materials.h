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

#ifndef SCENEFOA_SCENE_MATERIALS_H_
#define SCENEFOA_SCENE_MATERIALS_H_

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace scenefoa::scene {

// Octave bands centred on 125 Hz ... 8 kHz.
inline constexpr int kNumBands = 7;
inline constexpr std::array<double, kNumBands> kBandCenters = {125.0,  250.0,  500.0, 1000.0,
                                                              2000.0, 4000.0, 8000.0};
using Bands = std::array<double, kNumBands>;

enum class SemanticClass { kWall, kFloor, kCeiling, kFurniture, kGlass, kCurtain, kPerson, kOther };

std::string_view ClassName(SemanticClass c);
// Unknown labels map to kOther.
SemanticClass ParseClass(std::string_view label);
bool IsKnownClass(std::string_view label);

struct MaterialBands {
  Bands absorption{};
  Bands scattering{};

  friend bool operator==(const MaterialBands&, const MaterialBands&) = default;
};

// Built-in class -> material table (same values as materials/default_table.json).
MaterialBands AssignMaterial(SemanticClass c);
MaterialBands AssignMaterial(std::string_view label);

std::map<std::string, MaterialBands> LoadMaterialTable(const std::filesystem::path& path);

}  // namespace scenefoa::scene

#endif  // SCENEFOA_SCENE_MATERIALS_H_
