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

#include "scenefoa/diffusion/conditioning.h"

#include <algorithm>
#include <cmath>

#include "scenefoa/core/error.h"
#include "scenefoa/diffusion/codec.h"
#include "scenefoa/diffusion/layers.h"

namespace scenefoa::diffusion {

std::string_view ModeName(ConditioningMode mode) {
  switch (mode) {
    case ConditioningMode::kNone: return "none";
    case ConditioningMode::kVisual: return "visual";
    case ConditioningMode::kVisualDepth: return "visual+depth";
    case ConditioningMode::kFull: return "visual+depth+geometry";
  }
  return "none";
}

ConditioningMode ParseMode(std::string_view name) {
  for (auto m : {ConditioningMode::kNone, ConditioningMode::kVisual, ConditioningMode::kVisualDepth,
                 ConditioningMode::kFull}) {
    if (ModeName(m) == name) return m;
  }
  throw Error(ErrorCode::kOutOfRange, "unknown conditioning mode '" + std::string(name) + "'");
}

ConditioningVector ConditioningVector::Slice(int begin, int count) const {
  return {features.middleCols(begin, count), saliency.middleCols(begin, count)};
}

ConditioningVector ConditioningVector::PadTo(int count) const {
  ConditioningVector out{Mat::Zero(features.rows(), count), Mat::Zero(saliency.rows(), count)};
  const int n = frames();
  for (int f = 0; f < count; ++f) {
    const int src = std::min(f, n - 1);
    if (src < 0) break;
    out.features.col(f) = features.col(src);
    out.saliency.col(f) = saliency.col(src);
  }
  return out;
}

namespace {

void FillFrame(const acoustics::AcousticDescriptors& d, const acoustics::DescriptorFrame& frame,
               ConditioningMode mode, double* feat, double* sal) {
  const bool visual = mode != ConditioningMode::kNone;
  const bool depth = mode == ConditioningMode::kVisualDepth || mode == ConditioningMode::kFull;
  const bool geometry = mode == ConditioningMode::kFull;
  const int n = std::min<int>(kCondSources, frame.sources.size());
  for (int s = 0; s < n; ++s) {
    const auto& src = frame.sources[s];
    double* f = feat + s * kPerSourceFeatures;
    const double active = src.active ? 1.0 : 0.0;
    const double distance = std::max(src.distance, 0.1);
    if (visual) {
      const auto u = src.direction.UnitVector();
      for (int k = 0; k < 3; ++k) f[k] = u[k] * active;
      f[3] = active;
      sal[s] = active;
    }
    if (depth) {
      f[4] = std::log(distance) * active;
      sal[s] = active * std::min(1.0, 1.0 / distance);
    }
    if (geometry) {
      f[5] = src.occlusion.visible ? 1.0 : 0.0;
      for (int b = 0; b < 7; ++b) f[6 + b] = std::log10(std::max(src.occlusion.transmission[b], 1e-4)) / 4.0;
      for (int r = 0; r < std::min<int>(4, src.reflections.size()); ++r) {
        const auto& ref = src.reflections[r];
        if (!ref.valid) continue;
        double* fr = f + 13 + 5 * r;
        const auto u = ref.direction.UnitVector();
        for (int k = 0; k < 3; ++k) fr[k] = u[k];
        fr[3] = ref.delay * 100.0;
        double energy = 0.0;
        for (double g : ref.gains) energy += g * g;
        fr[4] = 10.0 * std::log10(std::max(energy / 7.0, 1e-12)) / 60.0;
      }
    }
  }
  if (geometry) {
    double* g = feat + kCondSources * kPerSourceFeatures;
    for (int b = 0; b < 7; ++b) g[b] = std::log(std::max(d.reverb.t60[b], 1e-3));
    g[7] = d.reverb.mixing_time * 10.0;
    g[8] = std::log(std::max(d.geometry.volume, 1e-3)) / 5.0;
    g[9] = std::log(std::max(d.geometry.area, 1e-3)) / 5.0;
    for (int b = 0; b < 7; ++b) g[10 + b] = d.geometry.mean_absorption[b];
  }
}

}  // namespace

ConditioningVector BuildConditioning(const acoustics::AcousticDescriptors& d, ConditioningMode mode,
                                     int latent_frames) {
  ConditioningVector c{Mat::Zero(kCondFeatures, latent_frames), Mat::Zero(kCondSources, latent_frames)};
  if (d.frames.empty()) return c;
  const int last = static_cast<int>(d.frames.size()) - 1;
  std::vector<double> feat(kCondFeatures), sal(kCondSources);
  int cached = -1;
  for (int f = 0; f < latent_frames; ++f) {
    const double center = (f + 1.0) * kCodecHop / foa::kDefaultSampleRate;
    const int k = std::clamp(static_cast<int>(std::lround(center * acoustics::kDescriptorRate)), 0, last);
    if (k != cached) {
      std::fill(feat.begin(), feat.end(), 0.0);
      std::fill(sal.begin(), sal.end(), 0.0);
      FillFrame(d, d.frames[k], mode, feat.data(), sal.data());
      cached = k;
    }
    for (int i = 0; i < kCondFeatures; ++i) c.features(i, f) = feat[i];
    for (int i = 0; i < kCondSources; ++i) c.saliency(i, f) = sal[i];
  }
  return c;
}

Mat SaliencyGate(const Mat& f_enc, const Mat& saliency, const Mat& w_att, const Eigen::VectorXd& b_att,
                 Mat* gate) {
  if (f_enc.cols() != saliency.cols() || w_att.rows() != f_enc.rows() ||
      w_att.cols() != f_enc.rows() + saliency.rows() || b_att.size() != f_enc.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "saliency gate operands do not align");
  }
  Mat joined(f_enc.rows() + saliency.rows(), f_enc.cols());
  joined << f_enc, saliency;
  Mat a = w_att * joined;
  a.colwise() += b_att;
  a = a.unaryExpr([](double v) { return Sigmoid(v); });
  Mat out = a.cwiseProduct(f_enc);
  if (gate) *gate = std::move(a);
  return out;
}

}  // namespace scenefoa::diffusion
