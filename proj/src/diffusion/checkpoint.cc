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

#include "scenefoa/diffusion/checkpoint.h"

#include <bit>
#include <cstring>

#include "json.hpp"
#include "scenefoa/core/error.h"
#include "scenefoa/io/wav.h"

namespace scenefoa::diffusion {
namespace {

using nlohmann::json;

template <typename T>
void PutLe(std::string& out, T value) {
  using U = std::conditional_t<sizeof(T) == 4, uint32_t, uint64_t>;
  U bits = std::bit_cast<U>(value);
  for (size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

template <typename T>
T GetLe(const std::string& in, size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 4, uint32_t, uint64_t>;
  if (pos + sizeof(U) > in.size()) throw Error(ErrorCode::kCorruptArtifact, "checkpoint truncated");
  U bits = 0;
  for (size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

uint64_t Fnv1a(const char* data, size_t n) {
  uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string SerializeCheckpoint(const Denoiser& model) {
  const auto& cfg = model.config();
  const auto& sched = model.schedule();
  json tensors = json::array();
  for (const auto& s : model.params().specs()) tensors.push_back({{"name", s.name}, {"shape", s.shape}});
  const json header = {
      {"schedule", {{"steps", sched.steps()}, {"beta_start", sched.beta_start()}, {"beta_end", sched.beta_end()}}},
      {"config",
       {{"width", cfg.width}, {"bins", cfg.bins}, {"max_frames", cfg.max_frames}, {"mode", ModeName(cfg.mode)}}},
      {"stats", {{"mean", model.stats().mean}, {"stddev", model.stats().stddev}}},
      {"tensors", tensors}};
  const std::string text = header.dump();
  std::string out(kCheckpointMagic, sizeof(kCheckpointMagic));
  PutLe<uint32_t>(out, kCheckpointVersion);
  PutLe<uint32_t>(out, static_cast<uint32_t>(text.size()));
  out += text;
  out.reserve(out.size() + model.params().size() * 4 + 8);
  for (double v : model.params().values()) PutLe<float>(out, static_cast<float>(v));
  PutLe<uint64_t>(out, Fnv1a(out.data(), out.size()));
  return out;
}

Denoiser ParseCheckpoint(const std::string& bytes) {
  if (bytes.size() < sizeof(kCheckpointMagic) + 16 ||
      std::memcmp(bytes.data(), kCheckpointMagic, sizeof(kCheckpointMagic)) != 0) {
    throw Error(ErrorCode::kCorruptArtifact, "not a denoiser checkpoint");
  }
  size_t tail = bytes.size() - 8;
  const uint64_t stored = GetLe<uint64_t>(bytes, tail);
  if (stored != Fnv1a(bytes.data(), bytes.size() - 8)) {
    throw Error(ErrorCode::kCorruptArtifact, "checkpoint checksum mismatch");
  }
  size_t pos = sizeof(kCheckpointMagic);
  const uint32_t version = GetLe<uint32_t>(bytes, pos);
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kCorruptArtifact, "unsupported checkpoint version " + std::to_string(version));
  }
  const uint32_t header_size = GetLe<uint32_t>(bytes, pos);
  if (pos + header_size > bytes.size() - 8) throw Error(ErrorCode::kCorruptArtifact, "checkpoint truncated");
  json header;
  try {
    header = json::parse(bytes.substr(pos, header_size));
    pos += header_size;
    DenoiserConfig cfg;
    cfg.width = header.at("config").at("width").get<double>();
    cfg.bins = header.at("config").at("bins").get<int>();
    cfg.max_frames = header.at("config").at("max_frames").get<int>();
    cfg.mode = ParseMode(header.at("config").at("mode").get<std::string>());
    const auto& s = header.at("schedule");
    const NoiseSchedule schedule(s.at("steps").get<int>(), s.at("beta_start").get<double>(),
                                 s.at("beta_end").get<double>());
    Denoiser model(cfg, schedule, 0);
    foa::ChannelStats stats;
    stats.mean = header.at("stats").at("mean").get<std::array<double, 4>>();
    stats.stddev = header.at("stats").at("stddev").get<std::array<double, 4>>();
    model.set_stats(stats);
    const auto& specs = model.params().specs();
    const auto& tensors = header.at("tensors");
    if (tensors.size() != specs.size()) throw Error(ErrorCode::kCorruptArtifact, "checkpoint tensor count differs");
    for (size_t i = 0; i < specs.size(); ++i) {
      if (tensors[i].at("name").get<std::string>() != specs[i].name ||
          tensors[i].at("shape").get<std::vector<int>>() != specs[i].shape) {
        throw Error(ErrorCode::kCorruptArtifact, "checkpoint tensor " + specs[i].name + " does not match the model");
      }
    }
    if (pos + model.params().size() * 4 != bytes.size() - 8) {
      throw Error(ErrorCode::kCorruptArtifact, "checkpoint weight blob has the wrong size");
    }
    for (double& v : model.params().values()) v = GetLe<float>(bytes, pos);
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptArtifact, std::string("checkpoint header: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptArtifact) throw;
    throw Error(ErrorCode::kCorruptArtifact, std::string("checkpoint header: ") + e.what());
  }
}

void SaveCheckpoint(const std::filesystem::path& path, const Denoiser& model) {
  io::WriteFileAtomic(path, SerializeCheckpoint(model));
}

Denoiser LoadCheckpoint(const std::filesystem::path& path) { return ParseCheckpoint(io::ReadFile(path)); }

}  // namespace scenefoa::diffusion
