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
#include <complex>
#include <numbers>

#include "scenefoa/core/random.h"
#include "scenefoa/dsp/band_bank.h"
#include "scenefoa/dsp/fft.h"

namespace scenefoa::dsp {
namespace {

std::vector<double> Noise(Rng& rng, size_t n) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.Normal();
  return x;
}

double Response(const std::vector<double>& taps, double freq, int rate) {
  std::complex<double> acc = 0.0;
  for (size_t i = 0; i < taps.size(); ++i) {
    acc += taps[i] * std::polar(1.0, -2.0 * std::numbers::pi * freq * static_cast<double>(i) / rate);
  }
  return std::abs(acc);
}

TEST(Fft, ConvolutionMatchesDirectForm) {
  Rng rng(1);
  for (auto [na, nb] : {std::pair{1, 1}, {100, 3}, {1000, 257}, {4097, 513}}) {
    const auto a = Noise(rng, na), b = Noise(rng, nb);
    const auto fast = Convolve(a, b);
    const auto slow = ConvolveDirect(a, b);
    ASSERT_EQ(fast.size(), slow.size());
    for (size_t i = 0; i < fast.size(); ++i) EXPECT_NEAR(fast[i], slow[i], 1e-10);
  }
  EXPECT_TRUE(Convolve(std::vector<double>{}, std::vector<double>{1.0}).empty());
}

TEST(Fft, RealTransformRoundTrip) {
  Rng rng(2);
  const auto x = Noise(rng, 1024);
  const auto back = Irfft(Rfft(x, 1024), 1024);
  for (size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(back[i], x[i], 1e-12);
}

TEST(BandBank, BandsSumToUnitImpulse) {
  const OctaveBandBank bank(16000);
  for (int i = 0; i < kBandFilterLength; ++i) {
    double sum = 0.0;
    for (int b = 0; b < kBandCount; ++b) sum += bank.taps(b)[i];
    EXPECT_NEAR(sum, i == OctaveBandBank::Delay() ? 1.0 : 0.0, 1e-15);
  }
}

TEST(BandBank, FiltersAreZeroPhase) {
  const OctaveBandBank bank(16000);
  for (int b = 0; b < kBandCount; ++b) {
    const auto& h = bank.taps(b);
    for (int i = 0; i < kBandFilterLength; ++i) {
      EXPECT_DOUBLE_EQ(h[i], h[kBandFilterLength - 1 - i]);
    }
  }
}

TEST(BandBank, EachBandDominatesAtItsCentre) {
  const OctaveBandBank bank(16000);
  const std::array<double, kBandCount> centres = {125, 250, 500, 1000, 2000, 4000, 7000};
  for (int b = 0; b < kBandCount; ++b) {
    const double own = Response(bank.taps(b), centres[b], 16000);
    EXPECT_GT(own, 0.5) << b;
    for (int o = 0; o < kBandCount; ++o) {
      if (o != b) EXPECT_LT(Response(bank.taps(o), centres[b], 16000), own) << b << " vs " << o;
    }
  }
}

TEST(BandBank, SplitReconstructsSignal) {
  Rng rng(3);
  const auto x = Noise(rng, 3000);
  const auto bands = OctaveBandBank::ForRate(16000).Split(x);
  for (size_t i = 0; i < x.size(); ++i) {
    double sum = 0.0;
    for (const auto& b : bands) sum += b[i];
    EXPECT_NEAR(sum, x[i], 1e-10);
  }
  const auto one = OctaveBandBank::ForRate(16000).Filter(x, 3);
  for (size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(one[i], bands[3][i], 1e-10);
}

TEST(BandBank, CombineWithFlatGainsIsScaledImpulse) {
  const auto& bank = OctaveBandBank::ForRate(16000);
  std::array<double, kBandCount> g;
  g.fill(0.25);
  const auto h = bank.Combine(g);
  for (int i = 0; i < kBandFilterLength; ++i) {
    EXPECT_EQ(h[i], i == OctaveBandBank::Delay() ? 0.25 : 0.0);
  }
  g[2] = 0.5;
  const auto mixed = bank.Combine(g);
  for (int i = 0; i < kBandFilterLength; ++i) {
    EXPECT_NEAR(mixed[i], (i == OctaveBandBank::Delay() ? 0.25 : 0.0) + 0.25 * bank.taps(2)[i], 1e-15);
  }
}

}  // namespace
}  // namespace scenefoa::dsp
