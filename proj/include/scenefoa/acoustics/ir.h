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

#ifndef SCENEFOA_ACOUSTICS_IR_H_
#define SCENEFOA_ACOUSTICS_IR_H_

#include <array>
#include <vector>

#include "scenefoa/acoustics/reverb.h"
#include "scenefoa/foa/types.h"

namespace scenefoa::acoustics {

// Late reverberation: per-band seeded noise starting at the mixing time with
// envelope exp(-6.91 t / T60(b)); W at the diffuse gain, X/Y/Z independent
// noise at 1/sqrt(3) of it. Band energies follow DiffuseEnergy. Length covers
// mixing_time + max T60.
std::array<std::vector<double>, 4> LateTail(const ReverbProfile& profile, const Bands& diffuse_energy,
                                            int sample_rate, uint64_t seed);

// Per-band diffuse energy of the manifest's room (zero for a fully absorbing room).
Bands RoomDiffuseEnergy(const scene::SceneManifest& m);

// Early paths (band-filtered impulses at their delays, encoded along their
// arrival directions) plus the late tail. Time zero is sample 0; filter taps
// before it are dropped.
foa::FoaClip SynthesizeIr(const std::vector<PropagationPath>& paths, const ReverbProfile& profile,
                          const scene::SceneManifest& m);

}  // namespace scenefoa::acoustics

#endif  // SCENEFOA_ACOUSTICS_IR_H_
