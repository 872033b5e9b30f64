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

#ifndef SCENEFOA_DIFFUSION_LAYERS_H_
#define SCENEFOA_DIFFUSION_LAYERS_H_

#include <string>
#include <vector>

#include "scenefoa/core/random.h"
#include "scenefoa/diffusion/tensor.h"

// Forward and reverse-mode kernels for the denoiser. Parameters live in a flat
// ParamSet; layers keep offsets into it. Backward passes accumulate (+=) into a
// gradient buffer laid out like the parameter vector and return the input
// gradient.
namespace scenefoa::diffusion {

// y = W x + b on every column of x (in x n).
struct Linear {
  size_t w = 0;
  size_t b = 0;
  int in = 0;
  int out = 0;

  void Init(ParamSet& ps, const std::string& name, int in_dim, int out_dim);
  Mat Forward(const double* p, const Mat& x) const;
  Mat Backward(const double* p, double* g, const Mat& x, const Mat& dy) const;
};

// 3x3 convolution, stride 1, zero padding 1.
struct Conv3x3 {
  size_t w = 0;
  size_t b = 0;
  int in = 0;
  int out = 0;

  void Init(ParamSet& ps, const std::string& name, int in_ch, int out_ch);
  Tensor Forward(const double* p, const Tensor& x) const;
  Tensor Backward(const double* p, double* g, const Tensor& x, const Tensor& dy) const;
};

inline constexpr double kGroupNormEpsilon = 1e-5;

int GroupCount(int channels);

struct GroupNormCache {
  Tensor xhat;
  std::vector<double> rstd;
};

// Normalizes each channel group over its channels and all positions.
Tensor GroupNorm(const Tensor& x, int groups, GroupNormCache* cache);
Tensor GroupNormBackward(const GroupNormCache& cache, int groups, const Tensor& dy);

// Per-row affine modulation y = x * (1 + gamma) + beta, with (gamma, beta)
// projected from an embedding column per row of x.
struct Film {
  Linear proj;  // embed -> 2 * channels
  int channels = 0;

  void Init(ParamSet& ps, const std::string& name, int embed, int ch);
  Tensor Forward(const double* p, const Tensor& x, const Mat& emb, Mat* modulation) const;
  // Accumulates the embedding gradient into `demb`.
  Tensor Backward(const double* p, double* g, const Tensor& x, const Mat& emb, const Mat& modulation,
                  const Tensor& dy, Mat& demb) const;
};

double Sigmoid(double x);
Tensor Silu(const Tensor& x);
Tensor SiluBackward(const Tensor& x, const Tensor& dy);
Mat Silu(const Mat& x);
Mat SiluBackward(const Mat& x, const Mat& dy);

// 2x2 average pooling and its adjoint.
Tensor AvgPool2(const Tensor& x);
Tensor AvgPool2Backward(const Tensor& dy);
// Nearest-neighbour 2x upsampling and its adjoint.
Tensor Upsample2(const Tensor& x);
Tensor Upsample2Backward(const Tensor& dy);

Tensor Concat(const Tensor& a, const Tensor& b);
void SplitChannels(const Tensor& dy, int first, Tensor* da, Tensor* db);

// Averages groups of `factor` adjacent columns.
Mat PoolColumns(const Mat& x, int factor);
Mat PoolColumnsBackward(const Mat& dy, int factor);

// GroupNorm -> modulation -> SiLU -> conv, twice, plus the identity.
struct ResBlock {
  Film film1, film2;
  Conv3x3 conv1, conv2;
  int groups = 1;

  struct Cache {
    Tensor x;
    GroupNormCache norm1, norm2;
    Mat mod1, mod2;
    Tensor act1, act2;  // modulated, before SiLU
    Tensor silu1, silu2;
    Tensor h1;
  };

  void Init(ParamSet& ps, const std::string& name, int channels, int embed);
  Tensor Forward(const double* p, const Tensor& x, const Mat& emb, Cache* cache) const;
  Tensor Backward(const double* p, double* g, const Cache& cache, const Mat& emb, const Tensor& dy,
                  Mat& demb) const;
};

// Fills a parameter slice with N(0, scale^2).
void FillNormal(ParamSet& ps, size_t offset, size_t count, double scale, Rng& rng);

}  // namespace scenefoa::diffusion

#endif  // SCENEFOA_DIFFUSION_LAYERS_H_
