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

#include "scenefoa/io/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "scenefoa/core/error.h"

namespace scenefoa::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

void PutU32(std::string& out, uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

void PutU16(std::string& out, uint16_t v) {
  char b[2];
  std::memcpy(b, &v, 2);
  out.append(b, 2);
}

uint32_t GetU32(const std::string& in, size_t pos) {
  uint32_t v;
  std::memcpy(&v, in.data() + pos, 4);
  return v;
}

uint16_t GetU16(const std::string& in, size_t pos) {
  uint16_t v;
  std::memcpy(&v, in.data() + pos, 2);
  return v;
}

[[noreturn]] void Corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptArtifact, "wav: " + what);
}

struct Parsed {
  WavInfo info;
  size_t data_pos = 0;
  size_t data_size = 0;
  std::string comment;
};

Parsed Parse(const std::string& bytes) {
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0) {
    Corrupt("not a RIFF/WAVE stream");
  }
  Parsed p;
  bool have_fmt = false;
  bool have_data = false;
  uint16_t tag = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const uint32_t size = GetU32(bytes, pos + 4);
    const size_t body = pos + 8;
    if (body + size > bytes.size()) {
      // Tolerate a truncated data chunk length written by streaming tools.
      if (id == "data") {
        p.data_pos = body;
        p.data_size = bytes.size() - body;
        have_data = true;
      }
      break;
    }
    if (id == "fmt ") {
      if (size < 16) Corrupt("short fmt chunk");
      tag = GetU16(bytes, body);
      p.info.channels = GetU16(bytes, body + 2);
      p.info.sample_rate = static_cast<int>(GetU32(bytes, body + 4));
      p.info.bits_per_sample = GetU16(bytes, body + 14);
      if (tag == kFormatExtensible && size >= 40) tag = GetU16(bytes, body + 24);
      have_fmt = true;
    } else if (id == "data") {
      p.data_pos = body;
      p.data_size = size;
      have_data = true;
    } else if (id == "LIST" && size >= 4 && bytes.compare(body, 4, "INFO") == 0) {
      size_t q = body + 4;
      while (q + 8 <= body + size) {
        const uint32_t sub = GetU32(bytes, q + 4);
        if (bytes.compare(q, 4, "ICMT") == 0) {
          std::string text = bytes.substr(q + 8, sub);
          text.erase(std::find(text.begin(), text.end(), '\0'), text.end());
          p.comment = text;
        }
        q += 8 + sub + (sub & 1);
      }
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt || !have_data) Corrupt("missing fmt or data chunk");
  if (p.info.channels <= 0 || p.info.sample_rate <= 0) Corrupt("bad header");
  if (tag == kFormatPcm && p.info.bits_per_sample == 16) {
    p.info.format = SampleFormat::kPcm16;
  } else if (tag == kFormatFloat && p.info.bits_per_sample == 32) {
    p.info.format = SampleFormat::kFloat32;
  } else {
    Corrupt("unsupported sample format (need 16-bit PCM or 32-bit float)");
  }
  const size_t frame_bytes =
      static_cast<size_t>(p.info.channels) * (p.info.bits_per_sample / 8);
  p.info.frames = p.data_size / frame_bytes;
  return p;
}

}  // namespace

std::string EncodeWav(const WavData& wav) {
  const int nch = static_cast<int>(wav.channels.size());
  if (nch == 0) throw Error(ErrorCode::kEmptyInput, "wav: no channels");
  const size_t frames = wav.frames();
  for (const auto& ch : wav.channels) {
    if (ch.size() != frames) throw Error(ErrorCode::kShapeMismatch, "wav: ragged channels");
  }
  const bool is_float = wav.format == SampleFormat::kFloat32;
  const uint16_t bits = is_float ? 32 : 16;
  const uint16_t block_align = static_cast<uint16_t>(nch * bits / 8);
  const uint32_t data_size = static_cast<uint32_t>(frames * block_align);

  std::string info;
  if (!wav.comment.empty()) {
    std::string text = wav.comment;
    text.push_back('\0');
    if (text.size() & 1) text.push_back('\0');
    info = "INFO";
    info += "ICMT";
    PutU32(info, static_cast<uint32_t>(text.size()));
    info += text;
  }

  std::string out;
  out.reserve(44 + data_size + info.size() + 8);
  out += "RIFF";
  const uint32_t riff_size = 4 + (8 + 16) + (info.empty() ? 0 : 8 + info.size()) +
                             8 + data_size + (data_size & 1);
  PutU32(out, riff_size);
  out += "WAVE";
  out += "fmt ";
  PutU32(out, 16);
  PutU16(out, is_float ? kFormatFloat : kFormatPcm);
  PutU16(out, static_cast<uint16_t>(nch));
  PutU32(out, static_cast<uint32_t>(wav.sample_rate));
  PutU32(out, static_cast<uint32_t>(wav.sample_rate) * block_align);
  PutU16(out, block_align);
  PutU16(out, bits);
  if (!info.empty()) {
    out += "LIST";
    PutU32(out, static_cast<uint32_t>(info.size()));
    out += info;
  }
  out += "data";
  PutU32(out, data_size);
  for (size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < nch; ++c) {
      const double x = wav.channels[c][i];
      if (is_float) {
        const float f = static_cast<float>(x);
        char b[4];
        std::memcpy(b, &f, 4);
        out.append(b, 4);
      } else {
        const double clamped = std::clamp(x, -1.0, 1.0);
        PutU16(out, static_cast<uint16_t>(
                        static_cast<int16_t>(std::lround(clamped * 32767.0))));
      }
    }
  }
  if (data_size & 1) out.push_back('\0');
  return out;
}

WavData DecodeWav(const std::string& bytes) {
  const Parsed p = Parse(bytes);
  WavData wav;
  wav.sample_rate = p.info.sample_rate;
  wav.format = p.info.format;
  wav.comment = p.comment;
  wav.channels.assign(p.info.channels, std::vector<double>(p.info.frames));
  const bool is_float = p.info.format == SampleFormat::kFloat32;
  size_t pos = p.data_pos;
  for (size_t i = 0; i < p.info.frames; ++i) {
    for (int c = 0; c < p.info.channels; ++c) {
      if (is_float) {
        float f;
        std::memcpy(&f, bytes.data() + pos, 4);
        wav.channels[c][i] = f;
        pos += 4;
      } else {
        const auto v = static_cast<int16_t>(GetU16(bytes, pos));
        wav.channels[c][i] = v / 32767.0;
        pos += 2;
      }
    }
  }
  return wav;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WavData ReadWav(const std::filesystem::path& path) { return DecodeWav(ReadFile(path)); }

WavInfo ReadWavInfo(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  // Header chunks precede the sample data; 64 KiB covers them in practice.
  std::string head(65536, '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<size_t>(in.gcount()));
  in.seekg(0, std::ios::end);
  const auto total = static_cast<size_t>(in.tellg());
  Parsed p = Parse(head);
  const size_t frame_bytes =
      static_cast<size_t>(p.info.channels) * (p.info.bits_per_sample / 8);
  const size_t data_size = std::min<size_t>(
      GetU32(head, p.data_pos - 4), total > p.data_pos ? total - p.data_pos : 0);
  p.info.frames = data_size / frame_bytes;
  return p.info;
}

void WriteFileAtomic(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void WriteWav(const std::filesystem::path& path, const WavData& wav) {
  WriteFileAtomic(path, EncodeWav(wav));
}

}  // namespace scenefoa::io
