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

#include "scenefoa/foa/hrir.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <numbers>

#include "json.hpp"
#include "scenefoa/core/error.h"
#include "scenefoa/io/wav.h"

namespace scenefoa::foa {

namespace {

constexpr double kPi = std::numbers::pi;

// Hann-windowed sinc impulse centred at a fractional position.
void AddFractionalImpulse(std::vector<double>& fir, double position, double gain) {
  constexpr int kHalf = 8;
  const int centre = static_cast<int>(std::floor(position));
  for (int k = centre - kHalf + 1; k <= centre + kHalf; ++k) {
    if (k < 0 || k >= static_cast<int>(fir.size())) continue;
    const double t = k - position;
    const double sinc = t == 0.0 ? 1.0 : std::sin(kPi * t) / (kPi * t);
    const double win = 0.5 * (1.0 + std::cos(kPi * t / kHalf));
    fir[k] += gain * sinc * win;
  }
}

}  // namespace

HrirSet::HrirSet(std::vector<HrirEntry> entries, int sample_rate)
    : entries_(std::move(entries)), sample_rate_(sample_rate) {
  if (entries_.size() < 6) {
    throw Error(ErrorCode::kInvalidHrirSet, "need at least 6 HRIR directions");
  }
  if (sample_rate_ <= 0) throw Error(ErrorCode::kInvalidHrirSet, "bad sample rate");
  fir_length_ = entries_[0].left.size();
  if (fir_length_ == 0) throw Error(ErrorCode::kInvalidHrirSet, "empty FIR");
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].left.size() != fir_length_ || entries_[i].right.size() != fir_length_) {
      throw Error(ErrorCode::kInvalidHrirSet, "FIR lengths differ");
    }
    for (size_t j = 0; j < i; ++j) {
      if (AngularDistance(entries_[i].direction, entries_[j].direction) < 1e-9) {
        throw Error(ErrorCode::kInvalidHrirSet, "duplicate HRIR direction");
      }
    }
  }
}

size_t HrirSet::Nearest(const Vec3& dir) const {
  size_t best = 0;
  double best_angle = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < entries_.size(); ++i) {
    const double a = AngularDistance(entries_[i].direction.UnitVector(), dir);
    if (a < best_angle - 1e-12) {
      best_angle = a;
      best = i;
    }
  }
  return best;
}

HrirSet HrirSet::Load(const std::filesystem::path& dir) {
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(io::ReadFile(dir / "hrir_index.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidHrirSet, std::string("hrir_index.json: ") + e.what());
  }
  if (!index.is_array()) throw Error(ErrorCode::kInvalidHrirSet, "index must be a list");
  std::vector<HrirEntry> entries;
  int rate = 0;
  for (const auto& item : index) {
    HrirEntry e;
    e.direction.elevation = item.at("elevation_rad").get<double>();
    e.direction.azimuth = item.at("azimuth_rad").get<double>();
    const io::WavData wav = io::ReadWav(dir / item.at("file").get<std::string>());
    if (wav.channels.size() != 2) {
      throw Error(ErrorCode::kInvalidHrirSet, "HRIR WAV must have 2 channels");
    }
    if (rate != 0 && wav.sample_rate != rate) {
      throw Error(ErrorCode::kInvalidHrirSet, "HRIR sample rates differ");
    }
    rate = wav.sample_rate;
    e.left = wav.channels[0];
    e.right = wav.channels[1];
    entries.push_back(std::move(e));
  }
  return HrirSet(std::move(entries), rate);
}

void HrirSet::Save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  nlohmann::json index = nlohmann::json::array();
  for (size_t i = 0; i < entries_.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "hrir_%03zu.wav", i);
    io::WavData wav;
    wav.sample_rate = sample_rate_;
    wav.format = io::SampleFormat::kFloat32;
    wav.channels = {entries_[i].left, entries_[i].right};
    io::WriteWav(dir / name, wav);
    index.push_back({{"elevation_rad", entries_[i].direction.elevation},
                     {"azimuth_rad", entries_[i].direction.azimuth},
                     {"file", name}});
  }
  io::WriteFileAtomic(dir / "hrir_index.json", index.dump(2) + "\n");
}

HrirSet HrirSet::Synthetic(int sample_rate, size_t fir_length) {
  constexpr double kHeadRadius = 0.0875;
  constexpr double kSpeedOfSound = 343.0;
  const double base_delay = std::min(20.0, fir_length / 3.0);
  std::vector<Direction> dirs;
  for (int el = -60; el <= 60; el += 30) {
    for (int az = -180; az < 180; az += 30) {
      dirs.push_back({el * kPi / 180.0, az * kPi / 180.0});
    }
  }
  dirs.push_back({kPi / 2, 0.0});
  dirs.push_back({-kPi / 2, 0.0});

  std::vector<HrirEntry> entries;
  for (const Direction& d : dirs) {
    const Vec3 u = d.UnitVector();
    const double lateral = std::asin(std::clamp(u.z(), -1.0, 1.0));  // + is right
    const double itd = kHeadRadius / kSpeedOfSound * (lateral + std::sin(lateral));
    const double itd_samples = itd * sample_rate;
    HrirEntry e;
    e.direction = d;
    e.left.assign(fir_length, 0.0);
    e.right.assign(fir_length, 0.0);
    AddFractionalImpulse(e.left, base_delay + itd_samples / 2, 0.6 - 0.4 * u.z());
    AddFractionalImpulse(e.right, base_delay - itd_samples / 2, 0.6 + 0.4 * u.z());
    entries.push_back(std::move(e));
  }
  return HrirSet(std::move(entries), sample_rate);
}

}  // namespace scenefoa::foa
