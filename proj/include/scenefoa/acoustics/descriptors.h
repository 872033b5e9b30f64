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

#ifndef SCENEFOA_ACOUSTICS_DESCRIPTORS_H_
#define SCENEFOA_ACOUSTICS_DESCRIPTORS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenefoa/acoustics/paths.h"
#include "scenefoa/acoustics/reverb.h"

namespace scenefoa::acoustics {

inline constexpr double kDescriptorRate = 10.0;  // Hz
inline constexpr int kTopReflections = 4;

struct ReflectionSummary {
  bool valid = false;
  foa::Direction direction;  // head frame
  double delay = 0.0;        // seconds
  Bands gains{};
};

struct SourceDescriptor {
  std::string id;
  foa::Direction direction;  // head frame
  double distance = 0.0;
  bool active = true;
  OcclusionDescriptor occlusion;
  std::vector<ReflectionSummary> reflections;  // kTopReflections, strongest first
};

struct GeometrySummary {
  double volume = 0.0;
  double area = 0.0;
  Bands mean_absorption{};
};

struct DescriptorFrame {
  double time = 0.0;
  std::vector<SourceDescriptor> sources;
};

struct AcousticDescriptors {
  std::vector<DescriptorFrame> frames;  // ceil(duration * 10)
  ReverbProfile reverb;
  GeometrySummary geometry;
};

AcousticDescriptors ComputeDescriptors(const scene::SceneManifest& m);
// Single-threaded reference of ComputeDescriptors.
AcousticDescriptors ComputeDescriptorsSerial(const scene::SceneManifest& m);

// One JSON object per frame; scene-constant fields repeat on every line.
std::string DescriptorsToJsonl(const AcousticDescriptors& d);
AcousticDescriptors DescriptorsFromJsonl(const std::string& text);
void WriteDescriptors(const std::filesystem::path& path, const AcousticDescriptors& d);
AcousticDescriptors ReadDescriptors(const std::filesystem::path& path);

}  // namespace scenefoa::acoustics

#endif  // SCENEFOA_ACOUSTICS_DESCRIPTORS_H_
