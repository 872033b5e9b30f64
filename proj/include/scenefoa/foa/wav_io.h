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

#ifndef SCENEFOA_FOA_WAV_IO_H_
#define SCENEFOA_FOA_WAV_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "scenefoa/foa/types.h"
#include "scenefoa/io/wav.h"

namespace scenefoa::foa {

enum class FoaLayout { kWxyz, kAmbix };

// Metadata comment embedded in every FOA WAV we write.
std::string FoaWavComment(FoaLayout layout);

io::WavData ToWav(const FoaClip& clip, FoaLayout layout = FoaLayout::kWxyz,
                  io::SampleFormat format = io::SampleFormat::kPcm16);
void WriteFoaWav(const std::filesystem::path& path, const FoaClip& clip,
                 FoaLayout layout = FoaLayout::kWxyz,
                 io::SampleFormat format = io::SampleFormat::kPcm16);

// Returns the clip in the internal W, X, Y, Z layout, converting from AmbiX
// when the file says so.
FoaClip FromWav(const io::WavData& wav);
FoaClip ReadFoaWav(const std::filesystem::path& path);

// Empty when the file is a 4-channel, 16 kHz, 16-bit PCM WAV.
std::vector<std::string> ValidateFoaWav(const std::filesystem::path& path);

}  // namespace scenefoa::foa

#endif  // SCENEFOA_FOA_WAV_IO_H_
