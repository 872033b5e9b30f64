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

#include "scenefoa/dsp/fft.h"

#include <unsupported/Eigen/FFT>

namespace scenefoa::dsp {

namespace {

// Plans are cached per size inside Eigen's FFT object.
Eigen::FFT<double>& Engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}

}  // namespace

size_t NextPow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<std::complex<double>> Rfft(std::span<const double> x, size_t n) {
  std::vector<double> padded(n, 0.0);
  std::copy_n(x.begin(), std::min(n, x.size()), padded.begin());
  std::vector<std::complex<double>> out;
  Engine().fwd(out, padded);
  return out;
}

std::vector<double> Irfft(const std::vector<std::complex<double>>& spectrum, size_t n) {
  std::vector<double> out;
  Engine().inv(out, spectrum, n);
  return out;
}

std::vector<double> ConvolveDirect(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<double> Convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  if (std::min(a.size(), b.size()) <= 64) return ConvolveDirect(a, b);
  return ConvolveMany(a, {std::vector<double>(b.begin(), b.end())})[0];
}

std::vector<std::vector<double>> ConvolveMany(std::span<const double> x,
                                              const std::vector<std::vector<double>>& kernels) {
  std::vector<std::vector<double>> out;
  if (x.empty()) {
    out.resize(kernels.size());
    return out;
  }
  size_t longest = 0;
  for (const auto& k : kernels) longest = std::max(longest, k.size());
  const size_t n = NextPow2(x.size() + longest);
  const auto xs = Rfft(x, n);
  for (const auto& k : kernels) {
    if (k.empty()) {
      out.emplace_back();
      continue;
    }
    auto ks = Rfft(k, n);
    for (size_t i = 0; i < ks.size(); ++i) ks[i] *= xs[i];
    auto y = Irfft(ks, n);
    y.resize(x.size() + k.size() - 1);
    out.push_back(std::move(y));
  }
  return out;
}

}  // namespace scenefoa::dsp
