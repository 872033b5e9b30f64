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

#ifndef SCENEFOA_IO_WAV_H_
#define SCENEFOA_IO_WAV_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace scenefoa::io {

enum class SampleFormat { kPcm16, kFloat32 };

struct WavData {
  int sample_rate = 16000;
  SampleFormat format = SampleFormat::kPcm16;
  std::vector<std::vector<double>> channels;
  // Free-form text stored in a LIST/INFO ICMT chunk.
  std::string comment;

  size_t frames() const { return channels.empty() ? 0 : channels[0].size(); }
};

struct WavInfo {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  SampleFormat format = SampleFormat::kPcm16;
  size_t frames = 0;
};

// Serializes to RIFF/WAVE bytes. PCM16 samples are clamped to [-1, 1] and
// scaled by 32767.
std::string EncodeWav(const WavData& wav);
WavData DecodeWav(const std::string& bytes);

WavData ReadWav(const std::filesystem::path& path);
WavInfo ReadWavInfo(const std::filesystem::path& path);

// Writes through a temporary file and renames, so readers never observe a
// partial file.
void WriteWav(const std::filesystem::path& path, const WavData& wav);

void WriteFileAtomic(const std::filesystem::path& path, const std::string& bytes);
std::string ReadFile(const std::filesystem::path& path);

}  // namespace scenefoa::io

#endif  // SCENEFOA_IO_WAV_H_
