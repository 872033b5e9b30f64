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

#ifndef SCENEFOA_DSP_FFT_H_
#define SCENEFOA_DSP_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace scenefoa::dsp {

size_t NextPow2(size_t n);

// Full linear convolution, length a.size() + b.size() - 1 (empty if either is).
std::vector<double> Convolve(std::span<const double> a, std::span<const double> b);
// Direct-form reference of Convolve.
std::vector<double> ConvolveDirect(std::span<const double> a, std::span<const double> b);

// Real FFT of x zero-padded to n (n a power of two); n / 2 + 1 bins.
std::vector<std::complex<double>> Rfft(std::span<const double> x, size_t n);
std::vector<double> Irfft(const std::vector<std::complex<double>>& spectrum, size_t n);

// One signal against several kernels, sharing the signal's transform.
std::vector<std::vector<double>> ConvolveMany(std::span<const double> x,
                                              const std::vector<std::vector<double>>& kernels);

}  // namespace scenefoa::dsp

#endif  // SCENEFOA_DSP_FFT_H_
