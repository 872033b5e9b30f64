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

#include "scenefoa/scene/materials.h"

#include "json.hpp"
#include "scenefoa/core/error.h"
#include "scenefoa/io/wav.h"

namespace scenefoa::scene {

namespace {

struct TableRow {
  SemanticClass cls;
  std::string_view name;
  MaterialBands bands;
};

// Absorption values are typical of published room-acoustics tables for each
// class; scattering is a coarse per-class constant.
const std::array<TableRow, 8>& Table() {
  static const std::array<TableRow, 8> kTable = {{
      {SemanticClass::kWall, "wall",
       {{0.10, 0.08, 0.07, 0.06, 0.06, 0.07, 0.08}, {0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10}}},
      {SemanticClass::kFloor, "floor",
       {{0.15, 0.11, 0.10, 0.07, 0.06, 0.07, 0.07}, {0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10}}},
      {SemanticClass::kCeiling, "ceiling",
       {{0.30, 0.40, 0.55, 0.65, 0.70, 0.70, 0.70}, {0.15, 0.15, 0.15, 0.15, 0.15, 0.15, 0.15}}},
      {SemanticClass::kFurniture, "furniture",
       {{0.20, 0.25, 0.30, 0.35, 0.40, 0.40, 0.40}, {0.50, 0.50, 0.50, 0.50, 0.50, 0.50, 0.50}}},
      {SemanticClass::kGlass, "glass",
       {{0.02, 0.03, 0.03, 0.04, 0.05, 0.06, 0.07}, {0.05, 0.05, 0.05, 0.05, 0.05, 0.05, 0.05}}},
      {SemanticClass::kCurtain, "curtain",
       {{0.07, 0.31, 0.49, 0.75, 0.70, 0.60, 0.60}, {0.40, 0.40, 0.40, 0.40, 0.40, 0.40, 0.40}}},
      {SemanticClass::kPerson, "person",
       {{0.25, 0.35, 0.42, 0.46, 0.50, 0.50, 0.50}, {0.60, 0.60, 0.60, 0.60, 0.60, 0.60, 0.60}}},
      {SemanticClass::kOther, "other",
       {{0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10}, {0.10, 0.10, 0.10, 0.10, 0.10, 0.10, 0.10}}},
  }};
  return kTable;
}

}  // namespace

std::string_view ClassName(SemanticClass c) {
  for (const auto& row : Table()) {
    if (row.cls == c) return row.name;
  }
  return "other";
}

bool IsKnownClass(std::string_view label) {
  for (const auto& row : Table()) {
    if (row.name == label) return true;
  }
  return false;
}

SemanticClass ParseClass(std::string_view label) {
  for (const auto& row : Table()) {
    if (row.name == label) return row.cls;
  }
  return SemanticClass::kOther;
}

MaterialBands AssignMaterial(SemanticClass c) {
  for (const auto& row : Table()) {
    if (row.cls == c) return row.bands;
  }
  return Table().back().bands;
}

MaterialBands AssignMaterial(std::string_view label) { return AssignMaterial(ParseClass(label)); }

std::map<std::string, MaterialBands> LoadMaterialTable(const std::filesystem::path& path) {
  std::map<std::string, MaterialBands> out;
  try {
    const auto doc = nlohmann::json::parse(io::ReadFile(path));
    for (const auto& [name, entry] : doc.at("classes").items()) {
      MaterialBands m;
      const auto a = entry.at("absorption").get<std::vector<double>>();
      const auto s = entry.at("scattering").get<std::vector<double>>();
      if (a.size() != kNumBands || s.size() != kNumBands) {
        throw Error(ErrorCode::kManifestInvalid, "material table: " + name + " needs 7 bands");
      }
      std::copy(a.begin(), a.end(), m.absorption.begin());
      std::copy(s.begin(), s.end(), m.scattering.begin());
      out[name] = m;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kManifestSyntax, std::string("material table: ") + e.what());
  }
  return out;
}

}  // namespace scenefoa::scene
