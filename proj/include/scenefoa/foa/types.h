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

#ifndef SCENEFOA_FOA_TYPES_H_
#define SCENEFOA_FOA_TYPES_H_

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cstddef>
#include <vector>

namespace scenefoa::foa {

using Vec3 = Eigen::Vector3d;

inline constexpr int kDefaultSampleRate = 16000;

// Axis convention: x forward, y up, z right (right-handed). A direction at
// elevation theta and azimuth phi maps to
// (cos(theta)cos(phi), sin(theta), cos(theta)sin(phi)).
struct Direction {
  double elevation = 0.0;  // [-pi/2, pi/2]
  double azimuth = 0.0;    // [-pi, pi)

  Vec3 UnitVector() const;
  bool IsValid() const;
  // Inverse of UnitVector for any non-zero vector.
  static Direction FromVector(const Vec3& v);
};

// Angle between two directions in radians, in [0, pi].
double AngularDistance(const Direction& a, const Direction& b);
double AngularDistance(const Vec3& a, const Vec3& b);

enum class Normalization { kRaw, kSn3d };

enum Channel : int { kW = 0, kX = 1, kY = 2, kZ = 3 };

// Four equal-length channels W, X, Y, Z.
class FoaClip {
 public:
  using Channels = std::array<std::vector<double>, 4>;

  FoaClip() = default;
  FoaClip(Channels channels, int sample_rate,
          Normalization normalization = Normalization::kSn3d);

  static FoaClip Zeros(size_t frames, int sample_rate = kDefaultSampleRate);

  const std::vector<double>& channel(int c) const { return channels_[c]; }
  const Channels& channels() const { return channels_; }
  // Consumes the clip.
  Channels TakeChannels() && { return std::move(channels_); }

  size_t frames() const { return channels_[0].size(); }
  bool empty() const { return frames() == 0; }
  int sample_rate() const { return sample_rate_; }
  Normalization normalization() const { return normalization_; }

  FoaClip Slice(size_t begin, size_t count) const;

  friend bool operator==(const FoaClip&, const FoaClip&) = default;

 private:
  Channels channels_;
  int sample_rate_ = kDefaultSampleRate;
  Normalization normalization_ = Normalization::kSn3d;
};

// Unit quaternion acting on the (x forward, y up, z right) frame.
class Rotation {
 public:
  Rotation() : q_(Eigen::Quaterniond::Identity()) {}

  // Throws kInvalidRotation when | |q| - 1 | > 1e-9.
  static Rotation FromQuaternion(double w, double x, double y, double z);
  // Normalizes first; rejects only the zero quaternion.
  static Rotation FromQuaternionNormalized(double w, double x, double y, double z);
  static Rotation Identity() { return Rotation(); }
  // Turns every direction so that its azimuth increases by `angle`.
  static Rotation FromYaw(double angle);
  // Raises every forward-ish direction's elevation by `angle`.
  static Rotation FromPitch(double angle);
  static Rotation FromAxisAngle(const Vec3& axis, double angle);

  Eigen::Matrix3d Matrix() const { return q_.toRotationMatrix(); }
  Vec3 Apply(const Vec3& v) const { return q_ * v; }
  Rotation Inverse() const { return Rotation(q_.conjugate()); }
  // (after ∘ this): apply this rotation first, then `after`.
  Rotation Then(const Rotation& after) const { return Rotation(after.q_ * q_); }
  std::array<double, 4> Wxyz() const { return {q_.w(), q_.x(), q_.y(), q_.z()}; }
  const Eigen::Quaterniond& quaternion() const { return q_; }

  // Spherical linear interpolation, u in [0, 1].
  static Rotation Slerp(const Rotation& a, const Rotation& b, double u);

 private:
  explicit Rotation(const Eigen::Quaterniond& q) : q_(q) {}
  Eigen::Quaterniond q_;
};

struct ChannelStats {
  std::array<double, 4> mean{};
  std::array<double, 4> stddev{1.0, 1.0, 1.0, 1.0};
};

inline constexpr double kStdClampFloor = 1e-8;

}  // namespace scenefoa::foa

#endif  // SCENEFOA_FOA_TYPES_H_
