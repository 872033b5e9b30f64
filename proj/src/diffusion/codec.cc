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

#include "scenefoa/diffusion/codec.h"

#include <cmath>
#include <numbers>

#include "scenefoa/core/error.h"

namespace scenefoa::diffusion {

size_t LatentFrames(size_t samples) {
  return std::max<size_t>(2, (samples + kCodecHop - 1) / kCodecHop);
}

LatentCodec::LatentCodec() : basis_(kCodecWindow, kLatentBins) {
  using std::numbers::pi;
  constexpr double m = kCodecHop;
  const double scale = std::sqrt(2.0 / m);
  for (int n = 0; n < kCodecWindow; ++n) {
    const double window = std::sin(pi * (n + 0.5) / kCodecWindow);
    for (int k = 0; k < kLatentBins; ++k) {
      basis_(n, k) = scale * window * std::cos(pi / m * (n + 0.5 + m / 2.0) * (k + 0.5));
    }
  }
}

std::vector<double> LatentCodec::Forward(const std::vector<double>& x, size_t frames) const {
  const size_t period = frames * kCodecHop;
  Eigen::MatrixXd blocks(kCodecWindow, frames);
  for (size_t f = 0; f < frames; ++f) {
    for (int n = 0; n < kCodecWindow; ++n) {
      const size_t i = (f * kCodecHop + n) % period;
      blocks(n, f) = i < x.size() ? x[i] : 0.0;
    }
  }
  // frames x bins, row-major to match Tensor rows = frames.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> coeffs =
      blocks.transpose() * basis_;
  return std::vector<double>(coeffs.data(), coeffs.data() + coeffs.size());
}

std::vector<double> LatentCodec::Inverse(const double* coeffs, size_t frames) const {
  const size_t period = frames * kCodecHop;
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(
      coeffs, frames, kLatentBins);
  const Eigen::MatrixXd blocks = basis_ * c.transpose();  // window x frames
  std::vector<double> y(period, 0.0);
  for (size_t f = 0; f < frames; ++f) {
    for (int n = 0; n < kCodecWindow; ++n) y[(f * kCodecHop + n) % period] += blocks(n, f);
  }
  return y;
}

LatentClip LatentCodec::Encode(const foa::FoaClip& clip) const {
  if (clip.sample_rate() != foa::kDefaultSampleRate) {
    throw Error(ErrorCode::kSampleRateMismatch,
                "latent codec needs 16000 Hz, got " + std::to_string(clip.sample_rate()));
  }
  const size_t frames = LatentFrames(clip.frames());
  LatentClip l;
  l.samples = clip.frames();
  l.tensor = Tensor(4, static_cast<int>(frames), kLatentBins);
  const size_t plane = frames * kLatentBins;
  for (int c = 0; c < 4; ++c) {
    const auto coeffs = Forward(clip.channels()[c], frames);
    std::copy(coeffs.begin(), coeffs.end(), l.tensor.data.begin() + c * plane);
  }
  return l;
}

foa::FoaClip LatentCodec::Decode(const LatentClip& latent) const {
  if (latent.standardized) {
    throw Error(ErrorCode::kShapeMismatch, "destandardize the latent before decoding");
  }
  const size_t frames = latent.tensor.rows;
  const size_t plane = frames * kLatentBins;
  foa::FoaClip::Channels ch;
  for (int c = 0; c < 4; ++c) {
    ch[c] = Inverse(latent.tensor.data.data() + c * plane, frames);
    ch[c].resize(latent.samples);
  }
  return foa::FoaClip(std::move(ch), foa::kDefaultSampleRate);
}

foa::ChannelStats LatentCodec::Statistics(const std::vector<LatentClip>& corpus) {
  foa::ChannelStats stats;
  for (int c = 0; c < 4; ++c) {
    double sum = 0.0, sq = 0.0;
    size_t n = 0;
    for (const auto& l : corpus) {
      const size_t plane = l.tensor.plane();
      for (size_t i = c * plane; i < (c + 1) * plane; ++i) {
        sum += l.tensor.data[i];
        sq += l.tensor.data[i] * l.tensor.data[i];
      }
      n += plane;
    }
    if (n == 0) continue;
    const double mean = sum / n;
    stats.mean[c] = mean;
    stats.stddev[c] = std::max(std::sqrt(std::max(sq / n - mean * mean, 0.0)), foa::kStdClampFloor);
  }
  return stats;
}

void LatentCodec::Standardize(LatentClip& l, const foa::ChannelStats& stats) {
  const size_t plane = l.tensor.plane();
  for (int c = 0; c < 4; ++c) {
    for (size_t i = c * plane; i < (c + 1) * plane; ++i) {
      l.tensor.data[i] = (l.tensor.data[i] - stats.mean[c]) / stats.stddev[c];
    }
  }
  l.standardized = true;
}

void LatentCodec::Destandardize(LatentClip& l, const foa::ChannelStats& stats) {
  const size_t plane = l.tensor.plane();
  for (int c = 0; c < 4; ++c) {
    for (size_t i = c * plane; i < (c + 1) * plane; ++i) {
      l.tensor.data[i] = l.tensor.data[i] * stats.stddev[c] + stats.mean[c];
    }
  }
  l.standardized = false;
}

}  // namespace scenefoa::diffusion
