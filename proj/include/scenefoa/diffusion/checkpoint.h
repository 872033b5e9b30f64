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

#ifndef SCENEFOA_DIFFUSION_CHECKPOINT_H_
#define SCENEFOA_DIFFUSION_CHECKPOINT_H_

#include <filesystem>
#include <string>

#include "scenefoa/diffusion/denoiser.h"

namespace scenefoa::diffusion {

inline constexpr char kCheckpointMagic[8] = {'S', 'F', 'O', 'A', 'D', 'I', 'F', 'F'};
inline constexpr uint32_t kCheckpointVersion = 1;

// Layout: magic, u32 version, u32 header size, JSON header (schedule, model
// config, latent statistics, tensor names and shapes), float32 weights in
// header order, u64 FNV-1a of all preceding bytes. Integers and floats are
// little-endian.
std::string SerializeCheckpoint(const Denoiser& model);
// Throws kCorruptArtifact on any mismatch.
Denoiser ParseCheckpoint(const std::string& bytes);

void SaveCheckpoint(const std::filesystem::path& path, const Denoiser& model);
Denoiser LoadCheckpoint(const std::filesystem::path& path);

}  // namespace scenefoa::diffusion

#endif  // SCENEFOA_DIFFUSION_CHECKPOINT_H_
