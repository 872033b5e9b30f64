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

#include "scenefoa/foa/ops.h"

#include <cmath>

#include "scenefoa/core/error.h"

namespace scenefoa::foa {

FoaClip EncodeSource(std::span<const double> signal, const Direction& dir,
                     int sample_rate) {
  if (signal.empty()) throw Error(ErrorCode::kEmptyInput, "encode: empty signal");
  if (!dir.IsValid()) throw Error(ErrorCode::kOutOfRange, "encode: invalid direction");
  const Vec3 u = dir.UnitVector();
  FoaClip::Channels ch;
  ch[kW].assign(signal.begin(), signal.end());
  for (int c = 0; c < 3; ++c) {
    ch[kX + c].resize(signal.size());
    for (size_t i = 0; i < signal.size(); ++i) ch[kX + c][i] = signal[i] * u[c];
  }
  return FoaClip(std::move(ch), sample_rate, Normalization::kSn3d);
}

std::pair<FoaClip, ChannelStats> ZScoreNormalize(const FoaClip& clip) {
  if (clip.empty()) throw Error(ErrorCode::kEmptyInput, "zscore: empty clip");
  ChannelStats stats;
  FoaClip::Channels out;
  const double n = static_cast<double>(clip.frames());
  for (int c = 0; c < 4; ++c) {
    const auto& x = clip.channel(c);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / n);
    if (!(sd >= kStdClampFloor)) sd = kStdClampFloor;
    stats.mean[c] = mean;
    stats.stddev[c] = sd;
    out[c].resize(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[c][i] = (x[i] - mean) / sd;
  }
  return {FoaClip(std::move(out), clip.sample_rate(), clip.normalization()), stats};
}

FoaClip ZScoreDenormalize(const FoaClip& clip, const ChannelStats& stats) {
  FoaClip::Channels out;
  for (int c = 0; c < 4; ++c) {
    const auto& x = clip.channel(c);
    out[c].resize(x.size());
    for (size_t i = 0; i < x.size(); ++i) out[c][i] = x[i] * stats.stddev[c] + stats.mean[c];
  }
  return FoaClip(std::move(out), clip.sample_rate(), clip.normalization());
}

FoaClip Rotate(const FoaClip& clip, const Rotation& r) {
  const Eigen::Matrix3d m = r.Matrix();
  FoaClip::Channels out;
  out[kW] = clip.channel(kW);
  const size_t n = clip.frames();
  for (int c = 1; c < 4; ++c) out[c].resize(n);
  const auto& x = clip.channel(kX);
  const auto& y = clip.channel(kY);
  const auto& z = clip.channel(kZ);
  for (size_t i = 0; i < n; ++i) {
    out[kX][i] = m(0, 0) * x[i] + m(0, 1) * y[i] + m(0, 2) * z[i];
    out[kY][i] = m(1, 0) * x[i] + m(1, 1) * y[i] + m(1, 2) * z[i];
    out[kZ][i] = m(2, 0) * x[i] + m(2, 1) * y[i] + m(2, 2) * z[i];
  }
  return FoaClip(std::move(out), clip.sample_rate(), clip.normalization());
}

const std::array<Vec3, 6>& VirtualSpeakers() {
  static const std::array<Vec3, 6> kSpeakers = {
      Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0),
      Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
  return kSpeakers;
}

std::array<double, 6> SpeakerGains(double w, double x, double y, double z) {
  std::array<double, 6> g;
  const auto& spk = VirtualSpeakers();
  for (size_t k = 0; k < 6; ++k) {
    g[k] = (w + spk[k].x() * x + spk[k].y() * y + spk[k].z() * z) / 6.0;
  }
  return g;
}

StereoSignal DecodeBinaural(const FoaClip& clip, const HrirSet& hrirs) {
  if (hrirs.entries().empty()) throw Error(ErrorCode::kInvalidHrirSet, "empty HRIR set");
  if (clip.sample_rate() != hrirs.sample_rate()) {
    throw Error(ErrorCode::kSampleRateMismatch, "clip and HRIR sample rates differ");
  }
  const size_t n = clip.frames();
  const size_t taps = hrirs.fir_length();
  StereoSignal out;
  if (n == 0) return out;
  out.left.assign(n + taps - 1, 0.0);
  out.right.assign(n + taps - 1, 0.0);

  const auto& spk = VirtualSpeakers();
  std::vector<double> feed(n);
  for (size_t k = 0; k < spk.size(); ++k) {
    const Vec3& d = spk[k];
    for (size_t i = 0; i < n; ++i) {
      feed[i] = (clip.channel(kW)[i] + d.x() * clip.channel(kX)[i] +
                 d.y() * clip.channel(kY)[i] + d.z() * clip.channel(kZ)[i]) /
                6.0;
    }
    const HrirEntry& h = hrirs.entries()[hrirs.Nearest(d)];
    for (size_t i = 0; i < n; ++i) {
      const double f = feed[i];
      if (f == 0.0) continue;
      double* l = out.left.data() + i;
      double* r = out.right.data() + i;
      for (size_t j = 0; j < taps; ++j) {
        l[j] += f * h.left[j];
        r[j] += f * h.right[j];
      }
    }
  }
  return out;
}

std::vector<DoaFrame> EstimateDoa(const FoaClip& clip, size_t window) {
  if (window < 1) throw Error(ErrorCode::kOutOfRange, "doa: window must be >= 1");
  if (clip.empty()) throw Error(ErrorCode::kEmptyInput, "doa: empty clip");
  std::vector<DoaFrame> frames;
  const size_t n = clip.frames();
  const auto& w = clip.channel(kW);
  const auto& x = clip.channel(kX);
  const auto& y = clip.channel(kY);
  const auto& z = clip.channel(kZ);
  for (size_t start = 0, idx = 0; start < n; start += window, ++idx) {
    const size_t end = std::min(n, start + window);
    Vec3 intensity = Vec3::Zero();
    double energy = 0.0;
    for (size_t i = start; i < end; ++i) {
      intensity += w[i] * Vec3(x[i], y[i], z[i]);
      energy += w[i] * w[i];
    }
    const double count = static_cast<double>(end - start);
    intensity /= count;
    energy /= count;
    const double norm = intensity.norm();
    if (energy <= 0.0 || !(norm >= 1e-10 * energy)) continue;
    frames.push_back({idx, static_cast<double>(start) / clip.sample_rate(),
                      Direction::FromVector(intensity)});
  }
  return frames;
}

FoaClip ToAmbix(const FoaClip& clip) {
  FoaClip::Channels out;
  out[0] = clip.channel(kW);
  out[1] = clip.channel(kZ);
  for (double& v : out[1]) v = -v;  // left = -right
  out[2] = clip.channel(kY);
  out[3] = clip.channel(kX);
  return FoaClip(std::move(out), clip.sample_rate(), clip.normalization());
}

FoaClip FromAmbix(const FoaClip& clip) {
  FoaClip::Channels out;
  out[kW] = clip.channel(0);
  out[kX] = clip.channel(3);
  out[kY] = clip.channel(2);
  out[kZ] = clip.channel(1);
  for (double& v : out[kZ]) v = -v;
  return FoaClip(std::move(out), clip.sample_rate(), clip.normalization());
}

}  // namespace scenefoa::foa
