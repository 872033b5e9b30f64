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

#ifndef SCENEFOA_SERVICE_SESSION_H_
#define SCENEFOA_SERVICE_SESSION_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scenefoa/foa/hrir.h"
#include "scenefoa/foa/types.h"

namespace scenefoa::service {

inline constexpr size_t kFrameSamples = 1024;
inline constexpr size_t kEnergyHop = 1600;  // 10 Hz at 16 kHz
inline constexpr int kEnergyRows = 16;      // elevation, top row first
inline constexpr int kEnergyCols = 32;      // azimuth from -pi

struct ClipInfo {
  std::string id;
  std::string kind;  // "reference" or "generated"
  std::filesystem::path dir;
};

// Clips a server can stream. Reference clips are read from ref.wav on first
// use; generated clips come from `generator` and are cached.
class ClipLibrary {
 public:
  using Generator = std::function<foa::FoaClip(const ClipInfo&)>;

  ClipLibrary() = default;
  // Every directory below `corpus` holding ref.wav becomes a reference clip
  // whose id is the directory path relative to `corpus`. With a generator,
  // directories that also hold descriptors.jsonl add a "gen/<id>" clip.
  static ClipLibrary Scan(const std::filesystem::path& corpus, Generator generator = nullptr);

  void Add(std::string id, foa::FoaClip clip);

  std::vector<ClipInfo> List() const;
  bool Contains(std::string_view id) const;
  // Throws kNotFound for unknown ids.
  std::shared_ptr<const foa::FoaClip> Get(std::string_view id) const;
  nlohmann::json ToJson() const;

 private:
  std::vector<ClipInfo> infos_;
  Generator generator_;
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  mutable std::map<std::string, std::shared_ptr<const foa::FoaClip>, std::less<>> cache_;
};

// 16 x 32 equirectangular grid of cardioid-beam energies over a window of a
// FOA clip. Each cell integrates (W + u.(X,Y,Z))^2 / 4 over its solid angle
// analytically, so the grid total depends only on the W energy and the
// directional energy and is unchanged by rotation.
using EnergyGrid = std::array<std::array<double, kEnergyCols>, kEnergyRows>;
EnergyGrid EnergyMap(const foa::FoaClip& clip, size_t begin, size_t count);
double GridTotal(const EnergyGrid& grid);

// One playback session. All protocol logic lives here so it can be driven
// without a network; the server only moves JSON text.
class Session {
 public:
  Session(std::string id, std::shared_ptr<const ClipLibrary> library,
          std::shared_ptr<const foa::HrirSet> hrirs);

  // Handles one client message; returns the immediate replies (meta, error).
  std::vector<nlohmann::json> HandleMessage(std::string_view text);

  bool playing() const { return playing_; }
  bool loaded() const { return clip_ != nullptr; }
  size_t cursor() const { return cursor_; }
  const std::string& id() const { return id_; }
  const foa::Rotation& orientation() const { return orientation_; }
  const std::string& clip_id() const { return clip_id_; }

  // Produces the next audio frame plus any energy maps whose 10 Hz boundary
  // it crosses, or an "ended" message at the end of the clip. Empty when not
  // playing. A pending orientation takes effect here, at the frame boundary.
  std::vector<nlohmann::json> NextFrame();

  // Head-frame FOA of the most recent audio frame (clip rotated by the
  // inverse listener orientation).
  const foa::FoaClip& last_frame() const { return last_frame_; }

 private:
  std::vector<nlohmann::json> Load(const nlohmann::json& msg);
  std::vector<nlohmann::json> SetOrientation(const nlohmann::json& msg);
  std::vector<nlohmann::json> Seek(const nlohmann::json& msg);

  std::string id_;
  std::shared_ptr<const ClipLibrary> library_;
  std::shared_ptr<const foa::HrirSet> hrirs_;
  std::shared_ptr<const foa::FoaClip> clip_;
  std::string clip_id_;
  size_t cursor_ = 0;
  bool playing_ = false;
  foa::Rotation orientation_;
  std::optional<foa::Rotation> pending_;
  std::array<std::vector<double>, 2> tail_;  // binaural overlap into the next frame
  foa::FoaClip last_frame_;
  uint64_t audio_seq_ = 0;
  uint64_t energy_seq_ = 0;
};

nlohmann::json ErrorMessage(std::string_view code, std::string_view detail);

// Base64 of interleaved 16-bit little-endian stereo PCM.
std::string EncodePcm(const std::vector<double>& left, const std::vector<double>& right);
// Inverse of EncodePcm; returns interleaved samples scaled to [-1, 1].
std::vector<double> DecodePcm(std::string_view base64);

}  // namespace scenefoa::service

#endif  // SCENEFOA_SERVICE_SESSION_H_
