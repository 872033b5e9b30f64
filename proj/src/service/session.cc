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

#include "scenefoa/service/session.h"

#include <boost/beast/core/detail/base64.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "scenefoa/core/error.h"
#include "scenefoa/foa/ops.h"
#include "scenefoa/foa/wav_io.h"

namespace scenefoa::service {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
namespace base64 = boost::beast::detail::base64;
constexpr double kPi = std::numbers::pi;

// Analytic first and second moments of the unit vector over one grid cell.
struct CellMoments {
  double area = 0.0;
  foa::Vec3 m1 = foa::Vec3::Zero();
  Eigen::Matrix3d m2 = Eigen::Matrix3d::Zero();
};

CellMoments Moments(double e0, double e1, double a0, double a1) {
  // Elevation integrals with the cos(el) area element.
  auto diff = [](auto f, double lo, double hi) { return f(hi) - f(lo); };
  const double c1 = diff([](double e) { return std::sin(e); }, e0, e1);
  const double c2 = diff([](double e) { return e / 2 + std::sin(2 * e) / 4; }, e0, e1);
  const double sc = diff([](double e) { return std::sin(e) * std::sin(e) / 2; }, e0, e1);
  const double c3 = diff([](double e) { return std::sin(e) - std::pow(std::sin(e), 3) / 3; }, e0, e1);
  const double s2c = diff([](double e) { return std::pow(std::sin(e), 3) / 3; }, e0, e1);
  const double c2s = diff([](double e) { return -std::pow(std::cos(e), 3) / 3; }, e0, e1);
  const double da = a1 - a0;
  const double ic = diff([](double a) { return std::sin(a); }, a0, a1);
  const double is = diff([](double a) { return -std::cos(a); }, a0, a1);
  const double icc = diff([](double a) { return a / 2 + std::sin(2 * a) / 4; }, a0, a1);
  const double iss = diff([](double a) { return a / 2 - std::sin(2 * a) / 4; }, a0, a1);
  const double isc = diff([](double a) { return std::sin(a) * std::sin(a) / 2; }, a0, a1);
  CellMoments m;
  m.area = c1 * da;
  m.m1 = foa::Vec3(c2 * ic, sc * da, c2 * is);
  m.m2(0, 0) = c3 * icc;
  m.m2(1, 1) = s2c * da;
  m.m2(2, 2) = c3 * iss;
  m.m2(0, 1) = m.m2(1, 0) = c2s * ic;
  m.m2(0, 2) = m.m2(2, 0) = c3 * isc;
  m.m2(1, 2) = m.m2(2, 1) = c2s * is;
  return m;
}

const std::array<std::array<CellMoments, kEnergyCols>, kEnergyRows>& GridMoments() {
  static const auto grid = [] {
    std::array<std::array<CellMoments, kEnergyCols>, kEnergyRows> g;
    for (int r = 0; r < kEnergyRows; ++r) {
      const double e1 = kPi / 2 - kPi * r / kEnergyRows;
      const double e0 = kPi / 2 - kPi * (r + 1) / kEnergyRows;
      for (int c = 0; c < kEnergyCols; ++c) {
        const double a0 = -kPi + 2 * kPi * c / kEnergyCols;
        const double a1 = -kPi + 2 * kPi * (c + 1) / kEnergyCols;
        g[r][c] = Moments(e0, e1, a0, a1);
      }
    }
    return g;
  }();
  return grid;
}

json StateMessage(const Session& s) {
  return {{"type", "state"}, {"playing", s.playing()}, {"cursor", s.cursor()}};
}

}  // namespace

ClipLibrary ClipLibrary::Scan(const fs::path& corpus, Generator generator) {
  if (!fs::is_directory(corpus)) throw Error(ErrorCode::kNotFound, corpus.string() + " is not a directory");
  ClipLibrary lib;
  lib.generator_ = std::move(generator);
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::recursive_directory_iterator(corpus)) {
    if (entry.is_regular_file() && entry.path().filename() == "ref.wav") dirs.push_back(entry.path().parent_path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& dir : dirs) {
    const std::string id = fs::relative(dir, corpus).generic_string();
    lib.infos_.push_back({id, "reference", dir});
  }
  if (lib.generator_) {
    for (const auto& dir : dirs) {
      if (!fs::exists(dir / "descriptors.jsonl")) continue;
      lib.infos_.push_back({"gen/" + fs::relative(dir, corpus).generic_string(), "generated", dir});
    }
  }
  return lib;
}

void ClipLibrary::Add(std::string id, foa::FoaClip clip) {
  std::lock_guard lock(*mu_);
  infos_.push_back({id, "reference", {}});
  cache_[id] = std::make_shared<const foa::FoaClip>(std::move(clip));
}

std::vector<ClipInfo> ClipLibrary::List() const {
  std::lock_guard lock(*mu_);
  return infos_;
}

bool ClipLibrary::Contains(std::string_view id) const {
  std::lock_guard lock(*mu_);
  return std::any_of(infos_.begin(), infos_.end(), [&](const ClipInfo& c) { return c.id == id; });
}

std::shared_ptr<const foa::FoaClip> ClipLibrary::Get(std::string_view id) const {
  std::lock_guard lock(*mu_);
  if (auto it = cache_.find(id); it != cache_.end()) return it->second;
  const auto info = std::find_if(infos_.begin(), infos_.end(), [&](const ClipInfo& c) { return c.id == id; });
  if (info == infos_.end()) throw Error(ErrorCode::kNotFound, "unknown clip '" + std::string(id) + "'");
  auto clip = std::make_shared<const foa::FoaClip>(info->kind == "generated" ? generator_(*info)
                                                                              : foa::ReadFoaWav(info->dir / "ref.wav"));
  cache_.emplace(std::string(id), clip);
  return clip;
}

json ClipLibrary::ToJson() const {
  json clips = json::array();
  for (const auto& c : List()) clips.push_back({{"id", c.id}, {"kind", c.kind}});
  return {{"clips", clips}};
}

EnergyGrid EnergyMap(const foa::FoaClip& clip, size_t begin, size_t count) {
  // 4 x 4 second-moment matrix of (W, X, Y, Z) over the window.
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
  const size_t end = std::min(clip.frames(), begin + count);
  for (size_t n = begin; n < end; ++n) {
    const Eigen::Vector4d v(clip.channel(0)[n], clip.channel(1)[n], clip.channel(2)[n], clip.channel(3)[n]);
    cov.noalias() += v * v.transpose();
  }
  const Eigen::Vector3d cross = cov.block<3, 1>(1, 0);
  const Eigen::Matrix3d dir = cov.block<3, 3>(1, 1);
  EnergyGrid grid;
  const auto& moments = GridMoments();
  for (int r = 0; r < kEnergyRows; ++r) {
    for (int c = 0; c < kEnergyCols; ++c) {
      const auto& m = moments[r][c];
      grid[r][c] = 0.25 * (cov(0, 0) * m.area + 2.0 * cross.dot(m.m1) + (dir.cwiseProduct(m.m2)).sum());
    }
  }
  return grid;
}

double GridTotal(const EnergyGrid& grid) {
  double total = 0.0;
  for (const auto& row : grid) {
    for (double v : row) total += v;
  }
  return total;
}

json ErrorMessage(std::string_view code, std::string_view detail) {
  return {{"type", "error"}, {"code", code}, {"detail", detail}};
}

std::string EncodePcm(const std::vector<double>& left, const std::vector<double>& right) {
  std::string raw(left.size() * 4, '\0');
  auto put = [&](size_t at, double v) {
    const auto s = static_cast<int16_t>(std::lround(std::clamp(v, -1.0, 1.0) * 32767.0));
    const auto u = static_cast<uint16_t>(s);
    raw[at] = static_cast<char>(u & 0xff);
    raw[at + 1] = static_cast<char>(u >> 8);
  };
  for (size_t i = 0; i < left.size(); ++i) {
    put(4 * i, left[i]);
    put(4 * i + 2, right[i]);
  }
  std::string out(base64::encoded_size(raw.size()), '\0');
  out.resize(base64::encode(out.data(), raw.data(), raw.size()));
  return out;
}

std::vector<double> DecodePcm(std::string_view text) {
  std::string raw(base64::decoded_size(text.size()), '\0');
  raw.resize(base64::decode(raw.data(), text.data(), text.size()).first);
  std::vector<double> out(raw.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    const auto u = static_cast<uint16_t>(static_cast<uint8_t>(raw[2 * i]) |
                                         (static_cast<uint8_t>(raw[2 * i + 1]) << 8));
    out[i] = static_cast<int16_t>(u) / 32767.0;
  }
  return out;
}

Session::Session(std::string id, std::shared_ptr<const ClipLibrary> library,
                 std::shared_ptr<const foa::HrirSet> hrirs)
    : id_(std::move(id)), library_(std::move(library)), hrirs_(std::move(hrirs)) {}

std::vector<json> Session::HandleMessage(std::string_view text) {
  json msg = json::parse(text, nullptr, false);
  if (msg.is_discarded()) return {ErrorMessage("bad_message", "malformed JSON")};
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    return {ErrorMessage("bad_message", "message must be an object with a string 'type'")};
  }
  const std::string type = msg["type"];
  if (type == "load") return Load(msg);
  if (type == "orientation") return SetOrientation(msg);
  if (type == "seek") return Seek(msg);
  if (type == "play" || type == "pause") {
    if (!clip_) return {ErrorMessage("no_clip", "load a clip first")};
    playing_ = type == "play" && cursor_ < clip_->frames();
    return {StateMessage(*this)};
  }
  return {ErrorMessage("bad_message", "unknown message type '" + type + "'")};
}

std::vector<json> Session::Load(const json& msg) {
  if (!msg.contains("clip_id") || !msg["clip_id"].is_string()) {
    return {ErrorMessage("bad_message", "load needs a string clip_id")};
  }
  const std::string id = msg["clip_id"];
  if (!library_->Contains(id)) return {ErrorMessage("not_found", "unknown clip '" + id + "'")};
  try {
    clip_ = library_->Get(id);
  } catch (const std::exception& e) {
    return {ErrorMessage("load_failed", e.what())};
  }
  clip_id_ = id;
  cursor_ = 0;
  playing_ = false;
  tail_ = {};
  return {{{"type", "meta"},
           {"session_id", id_},
           {"clip_id", id},
           {"samples", clip_->frames()},
           {"sample_rate", clip_->sample_rate()},
           {"channels", 2},
           {"frame_samples", kFrameSamples}}};
}

std::vector<json> Session::SetOrientation(const json& msg) {
  const auto bad = [] { return std::vector<json>{ErrorMessage("bad_message", "quat must be four finite numbers")}; };
  if (!msg.contains("quat") || !msg["quat"].is_array() || msg["quat"].size() != 4) return bad();
  std::array<double, 4> q{};
  for (int i = 0; i < 4; ++i) {
    if (!msg["quat"][i].is_number()) return bad();
    q[i] = msg["quat"][i].get<double>();
    if (!std::isfinite(q[i])) return bad();
  }
  try {
    pending_ = foa::Rotation::FromQuaternionNormalized(q[0], q[1], q[2], q[3]);
  } catch (const Error& e) {
    return {ErrorMessage("invalid_rotation", e.what())};
  }
  return {};
}

std::vector<json> Session::Seek(const json& msg) {
  if (!clip_) return {ErrorMessage("no_clip", "load a clip first")};
  if (!msg.contains("sample") || !msg["sample"].is_number_integer() || msg["sample"].get<int64_t>() < 0) {
    return {ErrorMessage("bad_message", "seek needs a non-negative integer sample")};
  }
  cursor_ = std::min<size_t>(msg["sample"].get<int64_t>(), clip_->frames());
  tail_ = {};
  if (cursor_ >= clip_->frames()) playing_ = false;
  return {StateMessage(*this)};
}

std::vector<json> Session::NextFrame() {
  if (!playing_ || !clip_) return {};
  if (pending_) {
    orientation_ = *pending_;
    pending_.reset();
  }
  const size_t start = cursor_;
  const size_t count = std::min(kFrameSamples, clip_->frames() - start);
  const foa::Rotation to_head = orientation_.Inverse();
  last_frame_ = foa::Rotate(clip_->Slice(start, count), to_head);
  auto stereo = foa::DecodeBinaural(last_frame_, *hrirs_);
  for (int ch = 0; ch < 2; ++ch) {
    auto& out = ch == 0 ? stereo.left : stereo.right;
    for (size_t i = 0; i < tail_[ch].size() && i < out.size(); ++i) out[i] += tail_[ch][i];
    tail_[ch].assign(out.begin() + static_cast<std::ptrdiff_t>(count), out.end());
    out.resize(count);
  }
  std::vector<json> out;
  out.push_back({{"type", "audio"},
                 {"seq", audio_seq_++},
                 {"start", start},
                 {"samples", count},
                 {"pcm", EncodePcm(stereo.left, stereo.right)},
                 {"sample_rate", clip_->sample_rate()},
                 {"channels", 2}});
  cursor_ = start + count;
  for (size_t b = (start / kEnergyHop + 1) * kEnergyHop; b <= cursor_; b += kEnergyHop) {
    const auto window = foa::Rotate(clip_->Slice(b - kEnergyHop, kEnergyHop), to_head);
    const auto grid = EnergyMap(window, 0, kEnergyHop);
    out.push_back({{"type", "energy_map"}, {"seq", energy_seq_++}, {"sample", b}, {"grid", grid}});
  }
  if (cursor_ >= clip_->frames()) {
    playing_ = false;
    out.push_back({{"type", "ended"}, {"clip_id", clip_id_}, {"samples", cursor_}});
  }
  return out;
}

}  // namespace scenefoa::service
