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

#ifndef SCENEFOA_FOA_HRIR_H_
#define SCENEFOA_FOA_HRIR_H_

#include <filesystem>
#include <vector>

#include "scenefoa/foa/types.h"

namespace scenefoa::foa {

struct HrirEntry {
  Direction direction;
  std::vector<double> left;
  std::vector<double> right;
};

class HrirSet {
 public:
  // Throws kInvalidHrirSet unless there are >= 6 entries of equal FIR length
  // with pairwise distinct directions.
  HrirSet(std::vector<HrirEntry> entries, int sample_rate);

  const std::vector<HrirEntry>& entries() const { return entries_; }
  int sample_rate() const { return sample_rate_; }
  size_t fir_length() const { return fir_length_; }

  // Index of the entry with the smallest angular distance to `dir`; ties go to
  // the lower index.
  size_t Nearest(const Vec3& dir) const;

  // Reads `hrir_index.json` ({elevation_rad, azimuth_rad, file} list) and the
  // 2-channel float WAVs it names.
  static HrirSet Load(const std::filesystem::path& dir);
  void Save(const std::filesystem::path& dir) const;

  // Rigid spherical-head approximation: Woodworth ITD plus a cosine head
  // shadow, on a 30-degree grid. Deterministic.
  static HrirSet Synthetic(int sample_rate = kDefaultSampleRate, size_t fir_length = 64);

 private:
  std::vector<HrirEntry> entries_;
  int sample_rate_;
  size_t fir_length_ = 0;
};

}  // namespace scenefoa::foa

#endif  // SCENEFOA_FOA_HRIR_H_
