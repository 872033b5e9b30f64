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

#include "scenefoa/acoustics/descriptors.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scenefoa/core/error.h"
#include "scenefoa/core/parallel.h"
#include "scenefoa/io/wav.h"
#include "scenefoa/scene/tracks.h"

namespace scenefoa::acoustics {

using nlohmann::json;

namespace {

double Strength(const Bands& g) {
  double e = 0.0;
  for (double v : g) e += v * v;
  return e;
}

SourceDescriptor Describe(const scene::SceneManifest& m, const scene::SceneState& st, size_t s,
                          int order) {
  SourceDescriptor d;
  d.id = m.sources[s].id;
  d.active = st.sources[s].active;
  const Vec3 rel = st.sources[s].position - st.listener_position;
  const foa::Rotation to_head = st.listener_orientation.Inverse();
  d.distance = rel.norm();
  d.reflections.resize(kTopReflections);
  d.occlusion.transmission.fill(1.0);
  if (d.distance < 1e-6) return d;
  d.direction = foa::Direction::FromVector(to_head.Apply(rel));
  d.occlusion = OcclusionTrace(st.sources[s].position, st.listener_position, m);

  std::vector<std::pair<double, ReflectionSummary>> found;
  for (const auto& p : ImageSources(m, st.sources[s].position, st.listener_position, order)) {
    if (p.order == 0) continue;
    ReflectionSummary r;
    r.valid = true;
    r.direction = foa::Direction::FromVector(to_head.Apply(p.arrival.UnitVector()));
    r.delay = static_cast<double>(p.delay) / m.sample_rate;
    r.gains = PathGain(p, m.air_attenuation);
    found.emplace_back(Strength(r.gains), r);
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t i = 0; i < found.size() && i < static_cast<size_t>(kTopReflections); ++i) {
    d.reflections[i] = found[i].second;
  }
  return d;
}

json DirectionJson(const foa::Direction& d) {
  return {{"elevation", d.elevation}, {"azimuth", d.azimuth}};
}

foa::Direction DirectionFrom(const json& j) {
  return {j.at("elevation").get<double>(), j.at("azimuth").get<double>()};
}

Bands BandsFrom(const json& j) {
  Bands b{};
  if (!j.is_array() || j.size() != b.size()) throw Error(ErrorCode::kCorruptArtifact, "expected 7 bands");
  for (size_t i = 0; i < b.size(); ++i) b[i] = j[i].get<double>();
  return b;
}

}  // namespace

namespace {

AcousticDescriptors ComputeDescriptorsImpl(const scene::SceneManifest& m, bool parallel) {
  AcousticDescriptors out;
  const int order = DefaultOrder(m);
  const auto frames = static_cast<size_t>(std::ceil(m.duration * kDescriptorRate - 1e-9));
  out.frames.resize(frames);
  const long n = static_cast<long>(frames);
#pragma omp parallel for schedule(dynamic) num_threads(parallel::Threads()) if (parallel)
  for (long f = 0; f < n; ++f) {
    const double t = static_cast<double>(f) / kDescriptorRate;
    const auto st = scene::SampleTracks(m, t);
    DescriptorFrame& frame = out.frames[f];
    frame.time = t;
    for (size_t s = 0; s < m.sources.size(); ++s) frame.sources.push_back(Describe(m, st, s, order));
  }

  const auto st0 = scene::SampleTracks(m, 0.0);
  std::vector<PropagationPath> early;
  for (size_t s = 0; s < m.sources.size(); ++s) {
    if ((st0.sources[s].position - st0.listener_position).norm() < 1e-6) continue;
    auto paths = ImageSources(m, st0.sources[s].position, st0.listener_position, order);
    early.insert(early.end(), paths.begin(), paths.end());
  }
  out.reverb = ReverbT60(m, early);
  out.geometry = {m.RoomVolume(), m.TotalArea(), MeanAbsorption(m)};
  return out;
}

}  // namespace

AcousticDescriptors ComputeDescriptors(const scene::SceneManifest& m) { return ComputeDescriptorsImpl(m, true); }

AcousticDescriptors ComputeDescriptorsSerial(const scene::SceneManifest& m) {
  return ComputeDescriptorsImpl(m, false);
}

std::string DescriptorsToJsonl(const AcousticDescriptors& d) {
  const json reverb = {{"t60", d.reverb.t60}, {"mixing_time", d.reverb.mixing_time}};
  const json geometry = {{"volume", d.geometry.volume},
                         {"area", d.geometry.area},
                         {"mean_absorption", d.geometry.mean_absorption}};
  std::ostringstream os;
  for (size_t f = 0; f < d.frames.size(); ++f) {
    const auto& frame = d.frames[f];
    json sources = json::array();
    for (const auto& s : frame.sources) {
      json refl = json::array();
      for (const auto& r : s.reflections) {
        refl.push_back({{"valid", r.valid},
                        {"direction", DirectionJson(r.direction)},
                        {"delay", r.delay},
                        {"gains", r.gains}});
      }
      sources.push_back({{"id", s.id},
                         {"direction", DirectionJson(s.direction)},
                         {"distance", s.distance},
                         {"active", s.active},
                         {"visible", s.occlusion.visible},
                         {"transmission", s.occlusion.transmission},
                         {"reflections", refl}});
    }
    const json line = {{"frame", f},         {"t", frame.time},      {"sources", sources},
                       {"reverb", reverb},   {"geometry", geometry}};
    os << line.dump() << "\n";
  }
  return os.str();
}

AcousticDescriptors DescriptorsFromJsonl(const std::string& text) {
  AcousticDescriptors d;
  std::istringstream is(text);
  std::string line;
  try {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      DescriptorFrame frame;
      frame.time = j.at("t").get<double>();
      for (const auto& js : j.at("sources")) {
        SourceDescriptor s;
        s.id = js.at("id").get<std::string>();
        s.direction = DirectionFrom(js.at("direction"));
        s.distance = js.at("distance").get<double>();
        s.active = js.at("active").get<bool>();
        s.occlusion.visible = js.at("visible").get<bool>();
        s.occlusion.transmission = BandsFrom(js.at("transmission"));
        for (const auto& jr : js.at("reflections")) {
          ReflectionSummary r;
          r.valid = jr.at("valid").get<bool>();
          r.direction = DirectionFrom(jr.at("direction"));
          r.delay = jr.at("delay").get<double>();
          r.gains = BandsFrom(jr.at("gains"));
          s.reflections.push_back(r);
        }
        frame.sources.push_back(std::move(s));
      }
      d.frames.push_back(std::move(frame));
      d.reverb.t60 = BandsFrom(j.at("reverb").at("t60"));
      d.reverb.mixing_time = j.at("reverb").at("mixing_time").get<double>();
      d.geometry.volume = j.at("geometry").at("volume").get<double>();
      d.geometry.area = j.at("geometry").at("area").get<double>();
      d.geometry.mean_absorption = BandsFrom(j.at("geometry").at("mean_absorption"));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptArtifact, std::string("descriptor file: ") + e.what());
  }
  return d;
}

void WriteDescriptors(const std::filesystem::path& path, const AcousticDescriptors& d) {
  io::WriteFileAtomic(path, DescriptorsToJsonl(d));
}

AcousticDescriptors ReadDescriptors(const std::filesystem::path& path) {
  return DescriptorsFromJsonl(io::ReadFile(path));
}

}  // namespace scenefoa::acoustics
