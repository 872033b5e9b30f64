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

#ifndef SCENEFOA_SCENE_SIGNALS_H_
#define SCENEFOA_SCENE_SIGNALS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace scenefoa::scene {

enum class SignalKind { kTone, kChirp, kNoiseBurst, kNoise };

// Seeded procedural dry signal.
struct ProceduralSignal {
  SignalKind kind = SignalKind::kNoise;
  uint64_t seed = 0;
  double amplitude = 0.3;
  double freq = 440.0;       // tone frequency / chirp start, Hz
  double freq_end = 2000.0;  // chirp end, Hz
  double burst_s = 0.25;     // noise burst length
  double gap_s = 0.25;       // silence between bursts
  double band_lo = 200.0;    // filtered-noise band edges, Hz
  double band_hi = 4000.0;

  friend bool operator==(const ProceduralSignal&, const ProceduralSignal&) = default;
};

std::vector<double> Synthesize(const ProceduralSignal& spec, int sample_rate, size_t frames);

nlohmann::json ToJson(const ProceduralSignal& spec);
ProceduralSignal ProceduralFromJson(const nlohmann::json& j);

}  // namespace scenefoa::scene

#endif  // SCENEFOA_SCENE_SIGNALS_H_
