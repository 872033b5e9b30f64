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

#include "scenefoa/foa/types.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scenefoa/core/error.h"

namespace scenefoa::foa {

Vec3 Direction::UnitVector() const {
  const double ce = std::cos(elevation);
  return {ce * std::cos(azimuth), std::sin(elevation), ce * std::sin(azimuth)};
}

bool Direction::IsValid() const {
  constexpr double kPi = std::numbers::pi;
  return std::isfinite(elevation) && std::isfinite(azimuth) &&
         elevation >= -kPi / 2 && elevation <= kPi / 2 && azimuth >= -kPi &&
         azimuth < kPi;
}

Direction Direction::FromVector(const Vec3& v) {
  const double n = v.norm();
  Direction d;
  if (n == 0.0) return d;
  d.elevation = std::asin(std::clamp(v.y() / n, -1.0, 1.0));
  d.azimuth = std::atan2(v.z(), v.x());
  if (d.azimuth >= std::numbers::pi) d.azimuth -= 2 * std::numbers::pi;
  return d;
}

double AngularDistance(const Vec3& a, const Vec3& b) {
  // atan2 form stays accurate for nearly parallel vectors.
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

double AngularDistance(const Direction& a, const Direction& b) {
  return AngularDistance(a.UnitVector(), b.UnitVector());
}

FoaClip::FoaClip(Channels channels, int sample_rate, Normalization normalization)
    : channels_(std::move(channels)),
      sample_rate_(sample_rate),
      normalization_(normalization) {
  if (sample_rate_ <= 0) {
    throw Error(ErrorCode::kSampleRateMismatch, "sample rate must be positive");
  }
  for (int c = 1; c < 4; ++c) {
    if (channels_[c].size() != channels_[0].size()) {
      throw Error(ErrorCode::kShapeMismatch, "FOA channels differ in length");
    }
  }
}

FoaClip FoaClip::Zeros(size_t frames, int sample_rate) {
  Channels ch;
  for (auto& c : ch) c.assign(frames, 0.0);
  return FoaClip(std::move(ch), sample_rate);
}

FoaClip FoaClip::Slice(size_t begin, size_t count) const {
  begin = std::min(begin, frames());
  count = std::min(count, frames() - begin);
  Channels ch;
  for (int c = 0; c < 4; ++c) {
    ch[c].assign(channels_[c].begin() + static_cast<std::ptrdiff_t>(begin),
                 channels_[c].begin() + static_cast<std::ptrdiff_t>(begin + count));
  }
  return FoaClip(std::move(ch), sample_rate_, normalization_);
}

Rotation Rotation::FromQuaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidRotation, "quaternion norm is not 1");
  }
  return Rotation(Eigen::Quaterniond(w, x, y, z));
}

Rotation Rotation::FromQuaternionNormalized(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n < 1e-12) {
    throw Error(ErrorCode::kInvalidRotation, "zero or non-finite quaternion");
  }
  return Rotation(Eigen::Quaterniond(w / n, x / n, y / n, z / n));
}

Rotation Rotation::FromAxisAngle(const Vec3& axis, double angle) {
  return Rotation(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized())));
}

// A right-handed turn about +y carries x toward -z, i.e. lowers azimuth.
Rotation Rotation::FromYaw(double angle) { return FromAxisAngle(Vec3::UnitY(), -angle); }

Rotation Rotation::FromPitch(double angle) { return FromAxisAngle(Vec3::UnitZ(), angle); }

Rotation Rotation::Slerp(const Rotation& a, const Rotation& b, double u) {
  return Rotation(a.q_.slerp(u, b.q_).normalized());
}

}  // namespace scenefoa::foa
