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

#include "scenefoa/foa/wav_io.h"

#include "scenefoa/core/error.h"
#include "scenefoa/foa/ops.h"

namespace scenefoa::foa {

namespace {
constexpr char kAmbixTag[] = "layout=ambix";
}

std::string FoaWavComment(FoaLayout layout) {
  if (layout == FoaLayout::kAmbix) {
    return "scenefoa foa order=1 layout=ambix channels=W,Y,Z,X norm=sn3d axes=x-front,y-left,z-up";
  }
  return "scenefoa foa order=1 layout=wxyz channels=W,X,Y,Z norm=sn3d axes=x-front,y-up,z-right";
}

io::WavData ToWav(const FoaClip& clip, FoaLayout layout, io::SampleFormat format) {
  const FoaClip& src = clip;
  FoaClip converted;
  if (layout == FoaLayout::kAmbix) converted = ToAmbix(clip);
  const FoaClip& use = layout == FoaLayout::kAmbix ? converted : src;
  io::WavData wav;
  wav.sample_rate = use.sample_rate();
  wav.format = format;
  wav.comment = FoaWavComment(layout);
  wav.channels.assign(use.channels().begin(), use.channels().end());
  return wav;
}

void WriteFoaWav(const std::filesystem::path& path, const FoaClip& clip, FoaLayout layout,
                 io::SampleFormat format) {
  io::WriteWav(path, ToWav(clip, layout, format));
}

FoaClip FromWav(const io::WavData& wav) {
  if (wav.channels.size() != 4) {
    throw Error(ErrorCode::kShapeMismatch, "FOA WAV must have 4 channels");
  }
  FoaClip::Channels ch;
  for (int c = 0; c < 4; ++c) ch[c] = wav.channels[c];
  FoaClip clip(std::move(ch), wav.sample_rate);
  if (wav.comment.find(kAmbixTag) != std::string::npos) return FromAmbix(clip);
  return clip;
}

FoaClip ReadFoaWav(const std::filesystem::path& path) { return FromWav(io::ReadWav(path)); }

std::vector<std::string> ValidateFoaWav(const std::filesystem::path& path) {
  std::vector<std::string> problems;
  io::WavInfo info;
  try {
    info = io::ReadWavInfo(path);
  } catch (const Error& e) {
    problems.push_back(e.what());
    return problems;
  }
  if (info.channels != 4) problems.push_back("expected 4 channels");
  if (info.sample_rate != kDefaultSampleRate) problems.push_back("expected 16000 Hz");
  if (info.format != io::SampleFormat::kPcm16 || info.bits_per_sample != 16) {
    problems.push_back("expected 16-bit PCM");
  }
  return problems;
}

}  // namespace scenefoa::foa
