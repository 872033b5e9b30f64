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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "scenefoa/core/error.h"
#include "scenefoa/core/random.h"
#include "scenefoa/foa/hrir.h"
#include "scenefoa/foa/ops.h"
#include "scenefoa/foa/wav_io.h"

namespace scenefoa::foa {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> Noise(Rng& rng, size_t n) {
  std::vector<double> s(n);
  for (double& v : s) v = rng.Normal();
  return s;
}

FoaClip RandomClip(Rng& rng, size_t n) {
  FoaClip::Channels ch;
  for (auto& c : ch) c = Noise(rng, n);
  return FoaClip(std::move(ch), kDefaultSampleRate);
}

Rotation RandomRotation(Rng& rng) {
  return Rotation::FromQuaternionNormalized(rng.Normal(), rng.Normal(), rng.Normal(),
                                            rng.Normal());
}

double Energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

TEST(DirectionTest, UnitVectorHasUnitNorm) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    Direction d{rng.Uniform(-kPi / 2, kPi / 2), rng.Uniform(-kPi, kPi)};
    EXPECT_NEAR(d.UnitVector().norm(), 1.0, 1e-12);
    const Direction back = Direction::FromVector(d.UnitVector());
    EXPECT_LT(AngularDistance(d, back), 1e-12);
  }
}

TEST(EncodeSourceTest, ForwardAxis) {
  const std::vector<double> s = {1.0};
  const FoaClip c = EncodeSource(s, {0.0, 0.0});
  EXPECT_EQ(c.channel(kW), std::vector<double>{1.0});
  EXPECT_EQ(c.channel(kX), std::vector<double>{1.0});
  EXPECT_EQ(c.channel(kY), std::vector<double>{0.0});
  EXPECT_EQ(c.channel(kZ), std::vector<double>{0.0});
  EXPECT_EQ(c.normalization(), Normalization::kSn3d);
}

TEST(EncodeSourceTest, Zenith) {
  const std::vector<double> s = {1.0};
  const FoaClip c = EncodeSource(s, {kPi / 2, 0.0});
  EXPECT_DOUBLE_EQ(c.channel(kW)[0], 1.0);
  EXPECT_NEAR(c.channel(kX)[0], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(c.channel(kY)[0], 1.0);
  EXPECT_DOUBLE_EQ(c.channel(kZ)[0], 0.0);
}

TEST(EncodeSourceTest, RightAxisScalesWithSignal) {
  const std::vector<double> s = {2.0};
  const FoaClip c = EncodeSource(s, {0.0, kPi / 2});
  EXPECT_DOUBLE_EQ(c.channel(kW)[0], 2.0);
  EXPECT_NEAR(c.channel(kX)[0], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(c.channel(kY)[0], 0.0);
  EXPECT_DOUBLE_EQ(c.channel(kZ)[0], 2.0);
}

TEST(EncodeSourceTest, EmptySignalIsRejected) {
  try {
    EncodeSource({}, {0.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
}

TEST(EncodeSourceTest, DirectionalEnergyBoundedByW) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const Direction d{rng.Uniform(-kPi / 2, kPi / 2), rng.Uniform(-kPi, kPi)};
    const FoaClip c = EncodeSource(Noise(rng, 64), d);
    for (size_t i = 0; i < c.frames(); ++i) {
      const double dir = c.channel(kX)[i] * c.channel(kX)[i] +
                         c.channel(kY)[i] * c.channel(kY)[i] +
                         c.channel(kZ)[i] * c.channel(kZ)[i];
      EXPECT_LE(dir, c.channel(kW)[i] * c.channel(kW)[i] + 1e-9);
    }
  }
}

TEST(ZScoreTest, ConstantChannelIsClamped) {
  FoaClip::Channels ch;
  ch[kW] = {1, 1, 1, 1};
  ch[kX] = {-1, 1, -1, 1};
  ch[kY] = {0, 0, 0, 0};
  ch[kZ] = {2, 4, 6, 8};
  const auto [norm, stats] = ZScoreNormalize(FoaClip(ch, 16000));
  EXPECT_EQ(norm.channel(kW), std::vector<double>(4, 0.0));
  EXPECT_DOUBLE_EQ(stats.mean[kW], 1.0);
  EXPECT_DOUBLE_EQ(stats.stddev[kW], kStdClampFloor);
  EXPECT_DOUBLE_EQ(stats.mean[kX], 0.0);
  EXPECT_DOUBLE_EQ(stats.stddev[kX], 1.0);
  EXPECT_EQ(norm.channel(kX), ch[kX]);
}

TEST(ZScoreTest, TwoSampleChannel) {
  FoaClip::Channels ch;
  for (auto& c : ch) c = {-1.0, 1.0};
  const auto [norm, stats] = ZScoreNormalize(FoaClip(ch, 16000));
  EXPECT_EQ(norm.channel(kW), (std::vector<double>{-1.0, 1.0}));
  EXPECT_DOUBLE_EQ(stats.mean[kW], 0.0);
  EXPECT_DOUBLE_EQ(stats.stddev[kW], 1.0);
}

TEST(ZScoreTest, RoundTripAndMoments) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    FoaClip::Channels ch;
    for (auto& c : ch) {
      const double scale = rng.Uniform(0.01, 100.0);
      const double offset = rng.Uniform(-10.0, 10.0);
      c = Noise(rng, 500);
      for (double& v : c) v = v * scale + offset;
    }
    const FoaClip clip(ch, 16000);
    const auto [norm, stats] = ZScoreNormalize(clip);
    for (int c = 0; c < 4; ++c) {
      double mean = 0.0;
      double sq = 0.0;
      for (double v : norm.channel(c)) mean += v;
      mean /= 500.0;
      for (double v : norm.channel(c)) sq += (v - mean) * (v - mean);
      EXPECT_NEAR(mean, 0.0, 1e-9);
      EXPECT_NEAR(std::sqrt(sq / 500.0), 1.0, 1e-6);
    }
    const FoaClip back = ZScoreDenormalize(norm, stats);
    for (int c = 0; c < 4; ++c) {
      for (size_t i = 0; i < 500; ++i) {
        EXPECT_NEAR(back.channel(c)[i], clip.channel(c)[i], 1e-9);
      }
    }
  }
}

TEST(RotationTest, RejectsNonUnitQuaternion) {
  try {
    Rotation::FromQuaternion(1.0, 0.1, 0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidRotation);
  }
  EXPECT_NO_THROW(Rotation::FromQuaternion(1.0, 0.0, 0.0, 0.0));
}

TEST(RotationTest, IdentityLeavesClipUnchanged) {
  Rng rng(4);
  const FoaClip c = RandomClip(rng, 256);
  EXPECT_EQ(Rotate(c, Rotation::Identity()), c);
}

TEST(RotationTest, YawMovesAzimuth) {
  const std::vector<double> s = {1.0, -0.5, 0.25};
  const FoaClip front = EncodeSource(s, {0.0, 0.0});
  const FoaClip turned = Rotate(front, Rotation::FromYaw(kPi / 2));
  const auto doa = EstimateDoa(turned, 3);
  ASSERT_EQ(doa.size(), 1u);
  EXPECT_NEAR(doa[0].direction.azimuth, kPi / 2, 1e-6);
  EXPECT_NEAR(doa[0].direction.elevation, 0.0, 1e-6);
  // The 3x3 matrix carries the forward vector onto +z.
  const Vec3 v = Rotation::FromYaw(kPi / 2).Apply(Vec3::UnitX());
  EXPECT_NEAR((v - Vec3::UnitZ()).norm(), 0.0, 1e-12);
}

TEST(RotationTest, PreservesWAndDirectionalEnergy) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const FoaClip c = RandomClip(rng, 32);
    const Rotation r = RandomRotation(rng);
    const Eigen::Matrix3d m = r.Matrix();
    EXPECT_LT((m.transpose() * m - Eigen::Matrix3d::Identity()).norm(), 1e-9);
    EXPECT_NEAR(m.determinant(), 1.0, 1e-9);
    const FoaClip out = Rotate(c, r);
    EXPECT_EQ(out.channel(kW), c.channel(kW));
    for (size_t i = 0; i < c.frames(); ++i) {
      const double before = c.channel(kX)[i] * c.channel(kX)[i] +
                            c.channel(kY)[i] * c.channel(kY)[i] +
                            c.channel(kZ)[i] * c.channel(kZ)[i];
      const double after = out.channel(kX)[i] * out.channel(kX)[i] +
                           out.channel(kY)[i] * out.channel(kY)[i] +
                           out.channel(kZ)[i] * out.channel(kZ)[i];
      EXPECT_NEAR(after, before, 1e-9 * std::max(1.0, before));
    }
  }
}

TEST(RotationTest, CompositionMatchesQuaternionProduct) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const FoaClip c = RandomClip(rng, 16);
    const Rotation r1 = RandomRotation(rng);
    const Rotation r2 = RandomRotation(rng);
    const FoaClip twice = Rotate(Rotate(c, r1), r2);
    const FoaClip once = Rotate(c, r1.Then(r2));
    for (int ch = 0; ch < 4; ++ch) {
      for (size_t i = 0; i < c.frames(); ++i) {
        EXPECT_NEAR(twice.channel(ch)[i], once.channel(ch)[i], 1e-9);
      }
    }
  }
}

TEST(RotationTest, SlerpOfIdenticalEndpointsIsConstant) {
  Rng rng(7);
  const Rotation q = RandomRotation(rng);
  for (double u : {0.0, 0.3, 0.5, 1.0}) {
    const auto a = Rotation::Slerp(q, q, u).Wxyz();
    const auto b = q.Wxyz();
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(DecodeBinauralTest, SilentClipGivesSilence) {
  const HrirSet h = HrirSet::Synthetic();
  const StereoSignal out = DecodeBinaural(FoaClip::Zeros(100), h);
  ASSERT_EQ(out.left.size(), 100 + h.fir_length() - 1);
  EXPECT_EQ(Energy(out.left), 0.0);
  EXPECT_EQ(Energy(out.right), 0.0);
}

TEST(DecodeBinauralTest, MirrorSymmetry) {
  const HrirSet h = HrirSet::Synthetic();
  Rng rng(8);
  const auto s = Noise(rng, 2000);
  const StereoSignal left = DecodeBinaural(EncodeSource(s, {0.0, -kPi / 2}), h);
  const StereoSignal right = DecodeBinaural(EncodeSource(s, {0.0, kPi / 2}), h);
  EXPECT_GT(Energy(left.left), Energy(left.right));
  EXPECT_NEAR(Energy(left.left), Energy(right.right), 1e-6 * Energy(left.left));
  EXPECT_NEAR(Energy(left.right), Energy(right.left), 1e-6 * Energy(left.right));
}

TEST(DecodeBinauralTest, OmniImpulseWithDeltaHrirs) {
  std::vector<HrirEntry> entries;
  for (const Vec3& d : VirtualSpeakers()) {
    entries.push_back({Direction::FromVector(d), {1.0}, {1.0}});
  }
  const HrirSet h(std::move(entries), 16000);
  FoaClip::Channels ch;
  ch[kW] = {1.0, 0.0};
  ch[kX] = ch[kY] = ch[kZ] = {0.0, 0.0};
  const StereoSignal out = DecodeBinaural(FoaClip(ch, 16000), h);
  // Six speakers, each with gain 1/6.
  const auto g = SpeakerGains(1.0, 0.0, 0.0, 0.0);
  double sum = 0.0;
  for (double v : g) sum += v;
  EXPECT_NEAR(out.left[0], sum, 1e-15);
  EXPECT_NEAR(out.left[0], 1.0, 1e-15);
  EXPECT_EQ(out.left, out.right);
}

TEST(DecodeBinauralTest, IsLinear) {
  const HrirSet h = HrirSet::Synthetic();
  Rng rng(9);
  const FoaClip a = RandomClip(rng, 300);
  const FoaClip b = RandomClip(rng, 300);
  const double ka = 0.7;
  const double kb = -1.9;
  FoaClip::Channels mix;
  for (int c = 0; c < 4; ++c) {
    mix[c].resize(300);
    for (size_t i = 0; i < 300; ++i) mix[c][i] = ka * a.channel(c)[i] + kb * b.channel(c)[i];
  }
  const StereoSignal da = DecodeBinaural(a, h);
  const StereoSignal db = DecodeBinaural(b, h);
  const StereoSignal dm = DecodeBinaural(FoaClip(mix, 16000), h);
  for (size_t i = 0; i < dm.left.size(); ++i) {
    EXPECT_NEAR(dm.left[i], ka * da.left[i] + kb * db.left[i], 1e-9);
    EXPECT_NEAR(dm.right[i], ka * da.right[i] + kb * db.right[i], 1e-9);
  }
}

TEST(DecodeBinauralTest, RateMismatchAndBadSets) {
  const HrirSet h = HrirSet::Synthetic(48000);
  try {
    DecodeBinaural(FoaClip::Zeros(10, 16000), h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSampleRateMismatch);
  }
  try {
    HrirSet({}, 16000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidHrirSet);
  }
}

TEST(HrirSetTest, SaveLoadRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "scenefoa_hrir_test";
  std::filesystem::remove_all(dir);
  const HrirSet h = HrirSet::Synthetic(16000, 32);
  h.Save(dir);
  const HrirSet back = HrirSet::Load(dir);
  ASSERT_EQ(back.entries().size(), h.entries().size());
  EXPECT_EQ(back.fir_length(), 32u);
  for (size_t i = 0; i < h.entries().size(); ++i) {
    EXPECT_LT(AngularDistance(back.entries()[i].direction, h.entries()[i].direction), 1e-12);
    for (size_t j = 0; j < 32; ++j) {
      EXPECT_NEAR(back.entries()[i].left[j], h.entries()[i].left[j], 1e-6);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST(EstimateDoaTest, RecoversPlaneWaveDirection) {
  Rng rng(10);
  const Direction d{0.3, -1.1};
  const FoaClip c = EncodeSource(Noise(rng, 16000), d);
  const auto frames = EstimateDoa(c, 1600);
  ASSERT_EQ(frames.size(), 10u);
  for (const auto& f : frames) {
    EXPECT_NEAR(f.direction.elevation, 0.3, 1e-6);
    EXPECT_NEAR(f.direction.azimuth, -1.1, 1e-6);
  }
  EXPECT_DOUBLE_EQ(frames[3].time, 0.3);
}

TEST(EstimateDoaTest, OmniOnlyClipHasNoEstimates) {
  Rng rng(11);
  FoaClip::Channels ch;
  ch[kW] = Noise(rng, 1000);
  ch[kX] = ch[kY] = ch[kZ] = std::vector<double>(1000, 0.0);
  EXPECT_TRUE(EstimateDoa(FoaClip(ch, 16000), 100).empty());
  EXPECT_TRUE(EstimateDoa(FoaClip::Zeros(1000), 100).empty());
}

TEST(EstimateDoaTest, AlternatingSourcesCluster) {
  Rng rng(12);
  const Direction a{0.0, kPi / 2};
  const Direction b{0.0, -kPi / 2};
  const size_t window = 800;
  const size_t n = window * 20;
  FoaClip::Channels mix;
  for (auto& c : mix) c.assign(n, 0.0);
  const auto sa = Noise(rng, n);
  const auto sb = Noise(rng, n);
  for (size_t i = 0; i < n; ++i) {
    const bool a_on = (i / window) % 2 == 0;
    const Vec3 u = a_on ? a.UnitVector() : b.UnitVector();
    const double s = a_on ? sa[i] : sb[i];
    mix[kW][i] = s;
    for (int k = 0; k < 3; ++k) mix[kX + k][i] = s * u[k];
  }
  const auto frames = EstimateDoa(FoaClip(mix, 16000), window);
  ASSERT_EQ(frames.size(), 20u);
  for (const auto& f : frames) {
    const Direction& truth = f.window_index % 2 == 0 ? a : b;
    EXPECT_LT(AngularDistance(f.direction, truth), 1e-6);
  }
}

TEST(EstimateDoaTest, EncodeThenEstimateProperty) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Direction d{rng.Uniform(-kPi / 2 + 1e-3, kPi / 2 - 1e-3), rng.Uniform(-kPi, kPi)};
    std::vector<double> s = Noise(rng, 64);
    const auto frames = EstimateDoa(EncodeSource(s, d), 64);
    ASSERT_EQ(frames.size(), 1u);
    EXPECT_LT(AngularDistance(frames[0].direction, d), 1e-6);
  }
}

TEST(AmbixTest, RoundTripAndAxisMapping) {
  Rng rng(14);
  const FoaClip c = RandomClip(rng, 50);
  EXPECT_EQ(FromAmbix(ToAmbix(c)), c);
  // A source on the right (+z here) is on the negative AmbiX y axis.
  const std::vector<double> s = {1.0};
  const FoaClip right = ToAmbix(EncodeSource(s, {0.0, kPi / 2}));
  EXPECT_NEAR(right.channel(1)[0], -1.0, 1e-15);
}

TEST(FoaWavTest, PcmRoundTripAndValidation) {
  const auto path = std::filesystem::temp_directory_path() / "scenefoa_foa_wav_test.wav";
  Rng rng(15);
  FoaClip::Channels ch;
  for (auto& c : ch) {
    c = Noise(rng, 1000);
    for (double& v : c) v *= 0.1;
  }
  const FoaClip clip(ch, 16000);
  WriteFoaWav(path, clip);
  EXPECT_TRUE(ValidateFoaWav(path).empty());
  const FoaClip back = ReadFoaWav(path);
  for (int c = 0; c < 4; ++c) {
    for (size_t i = 0; i < 1000; ++i) {
      EXPECT_NEAR(back.channel(c)[i], clip.channel(c)[i], 0.5 / 32767.0 + 1e-12);
    }
  }
  WriteFoaWav(path, clip, FoaLayout::kAmbix, io::SampleFormat::kFloat32);
  EXPECT_FALSE(ValidateFoaWav(path).empty());  // float is not the delivery format
  const FoaClip ambix_back = ReadFoaWav(path);
  EXPECT_NEAR(ambix_back.channel(kZ)[5], clip.channel(kZ)[5], 1e-7);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace scenefoa::foa
