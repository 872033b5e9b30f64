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

#include "scenefoa/diffusion/layers.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scenefoa::diffusion {
namespace {

using ConstMap = Eigen::Map<const Mat>;
using MutMap = Eigen::Map<Mat>;

constexpr int kChunk = 2048;

// Patch matrix (in * 9) x n for output pixels [p0, p0 + n).
void Im2Col(const Tensor& x, int p0, int n, Mat& cols) {
  const int h = x.rows, w = x.cols;
  for (int ci = 0; ci < x.channels; ++ci) {
    const double* src = x.data.data() + static_cast<size_t>(ci) * h * w;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        double* dst = cols.data() + static_cast<size_t>(ci * 9 + ky * 3 + kx) * cols.cols();
        for (int j = 0; j < n; ++j) {
          const int pix = p0 + j;
          const int r = pix / w + ky - 1;
          const int c = pix % w + kx - 1;
          dst[j] = (r >= 0 && r < h && c >= 0 && c < w) ? src[r * w + c] : 0.0;
        }
      }
    }
  }
}

void Col2Im(const Mat& cols, int p0, int n, Tensor& dx) {
  const int h = dx.rows, w = dx.cols;
  for (int ci = 0; ci < dx.channels; ++ci) {
    double* dst = dx.data.data() + static_cast<size_t>(ci) * h * w;
    for (int ky = 0; ky < 3; ++ky) {
      for (int kx = 0; kx < 3; ++kx) {
        const double* src = cols.data() + static_cast<size_t>(ci * 9 + ky * 3 + kx) * cols.cols();
        for (int j = 0; j < n; ++j) {
          const int pix = p0 + j;
          const int r = pix / w + ky - 1;
          const int c = pix % w + kx - 1;
          if (r >= 0 && r < h && c >= 0 && c < w) dst[r * w + c] += src[j];
        }
      }
    }
  }
}

}  // namespace

void FillNormal(ParamSet& ps, size_t offset, size_t count, double scale, Rng& rng) {
  for (size_t i = 0; i < count; ++i) ps.values()[offset + i] = scale * rng.Normal();
}

void Linear::Init(ParamSet& ps, const std::string& name, int in_dim, int out_dim) {
  in = in_dim;
  out = out_dim;
  w = ps.Add(name + ".weight", {out, in});
  b = ps.Add(name + ".bias", {out}, false);
}

Mat Linear::Forward(const double* p, const Mat& x) const {
  ConstMap wm(p + w, out, in);
  Eigen::Map<const Eigen::VectorXd> bv(p + b, out);
  Mat y = wm * x;
  y.colwise() += bv;
  return y;
}

Mat Linear::Backward(const double* p, double* g, const Mat& x, const Mat& dy) const {
  ConstMap wm(p + w, out, in);
  MutMap gw(g + w, out, in);
  Eigen::Map<Eigen::VectorXd> gb(g + b, out);
  gw.noalias() += dy * x.transpose();
  gb += dy.rowwise().sum();
  return wm.transpose() * dy;
}

void Conv3x3::Init(ParamSet& ps, const std::string& name, int in_ch, int out_ch) {
  in = in_ch;
  out = out_ch;
  w = ps.Add(name + ".weight", {out, in, 3, 3});
  b = ps.Add(name + ".bias", {out}, false);
}

Tensor Conv3x3::Forward(const double* p, const Tensor& x) const {
  Tensor y(out, x.rows, x.cols);
  const int hw = x.plane();
  const int k = in * 9;
  ConstMap wm(p + w, out, k);
  MutMap ym(y.data.data(), out, hw);
  Mat cols(k, std::min(kChunk, hw));
  for (int p0 = 0; p0 < hw; p0 += kChunk) {
    const int n = std::min(kChunk, hw - p0);
    Im2Col(x, p0, n, cols);
    ym.middleCols(p0, n).noalias() = wm * cols.leftCols(n);
  }
  Eigen::Map<const Eigen::VectorXd> bv(p + b, out);
  ym.colwise() += bv;
  return y;
}

Tensor Conv3x3::Backward(const double* p, double* g, const Tensor& x, const Tensor& dy) const {
  Tensor dx(in, x.rows, x.cols);
  const int hw = x.plane();
  const int k = in * 9;
  ConstMap wm(p + w, out, k);
  MutMap gw(g + w, out, k);
  ConstMap dym(dy.data.data(), out, hw);
  Mat cols(k, std::min(kChunk, hw));
  Mat dcols(k, std::min(kChunk, hw));
  for (int p0 = 0; p0 < hw; p0 += kChunk) {
    const int n = std::min(kChunk, hw - p0);
    Im2Col(x, p0, n, cols);
    gw.noalias() += dym.middleCols(p0, n) * cols.leftCols(n).transpose();
    dcols.leftCols(n).noalias() = wm.transpose() * dym.middleCols(p0, n);
    Col2Im(dcols, p0, n, dx);
  }
  Eigen::Map<Eigen::VectorXd> gb(g + b, out);
  gb += dym.rowwise().sum();
  return dx;
}

int GroupCount(int channels) {
  const int g = std::min(8, std::max(1, channels / 2));
  return std::gcd(channels, g);
}

Tensor GroupNorm(const Tensor& x, int groups, GroupNormCache* cache) {
  Tensor y(x.channels, x.rows, x.cols);
  const size_t per = static_cast<size_t>(x.channels / groups) * x.plane();
  cache->rstd.assign(groups, 0.0);
  for (int gi = 0; gi < groups; ++gi) {
    const double* src = x.data.data() + gi * per;
    double mean = 0.0;
    for (size_t i = 0; i < per; ++i) mean += src[i];
    mean /= per;
    double var = 0.0;
    for (size_t i = 0; i < per; ++i) var += (src[i] - mean) * (src[i] - mean);
    var /= per;
    const double rstd = 1.0 / std::sqrt(var + kGroupNormEpsilon);
    cache->rstd[gi] = rstd;
    double* dst = y.data.data() + gi * per;
    for (size_t i = 0; i < per; ++i) dst[i] = (src[i] - mean) * rstd;
  }
  cache->xhat = y;
  return y;
}

Tensor GroupNormBackward(const GroupNormCache& cache, int groups, const Tensor& dy) {
  const Tensor& xhat = cache.xhat;
  Tensor dx(dy.channels, dy.rows, dy.cols);
  const size_t per = static_cast<size_t>(dy.channels / groups) * dy.plane();
  for (int gi = 0; gi < groups; ++gi) {
    const double* d = dy.data.data() + gi * per;
    const double* xh = xhat.data.data() + gi * per;
    double mean_d = 0.0, mean_dx = 0.0;
    for (size_t i = 0; i < per; ++i) {
      mean_d += d[i];
      mean_dx += d[i] * xh[i];
    }
    mean_d /= per;
    mean_dx /= per;
    double* out = dx.data.data() + gi * per;
    for (size_t i = 0; i < per; ++i) out[i] = cache.rstd[gi] * (d[i] - mean_d - xh[i] * mean_dx);
  }
  return dx;
}

void Film::Init(ParamSet& ps, const std::string& name, int embed, int ch) {
  channels = ch;
  proj.Init(ps, name, embed, 2 * ch);
}

Tensor Film::Forward(const double* p, const Tensor& x, const Mat& emb, Mat* modulation) const {
  *modulation = proj.Forward(p, emb);
  const Mat& m = *modulation;
  Tensor y(x.channels, x.rows, x.cols);
  for (int c = 0; c < x.channels; ++c) {
    for (int r = 0; r < x.rows; ++r) {
      const double scale = 1.0 + m(c, r);
      const double shift = m(channels + c, r);
      const double* src = &x.data[(static_cast<size_t>(c) * x.rows + r) * x.cols];
      double* dst = &y.data[(static_cast<size_t>(c) * x.rows + r) * x.cols];
      for (int k = 0; k < x.cols; ++k) dst[k] = src[k] * scale + shift;
    }
  }
  return y;
}

Tensor Film::Backward(const double* p, double* g, const Tensor& x, const Mat& emb, const Mat& modulation,
                      const Tensor& dy, Mat& demb) const {
  Tensor dx(x.channels, x.rows, x.cols);
  Mat dm = Mat::Zero(modulation.rows(), modulation.cols());
  for (int c = 0; c < x.channels; ++c) {
    for (int r = 0; r < x.rows; ++r) {
      const double scale = 1.0 + modulation(c, r);
      const size_t base = (static_cast<size_t>(c) * x.rows + r) * x.cols;
      double dscale = 0.0, dshift = 0.0;
      for (int k = 0; k < x.cols; ++k) {
        dscale += dy.data[base + k] * x.data[base + k];
        dshift += dy.data[base + k];
        dx.data[base + k] = dy.data[base + k] * scale;
      }
      dm(c, r) = dscale;
      dm(channels + c, r) = dshift;
    }
  }
  demb += proj.Backward(p, g, emb, dm);
  return dx;
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

inline double SiluGrad(double x) {
  const double s = Sigmoid(x);
  return s * (1.0 + x * (1.0 - s));
}

}  // namespace

Tensor Silu(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.data) v *= Sigmoid(v);
  return y;
}

Tensor SiluBackward(const Tensor& x, const Tensor& dy) {
  Tensor dx = dy;
  for (size_t i = 0; i < dx.size(); ++i) dx.data[i] *= SiluGrad(x.data[i]);
  return dx;
}

Mat Silu(const Mat& x) { return x.unaryExpr([](double v) { return v * Sigmoid(v); }); }

Mat SiluBackward(const Mat& x, const Mat& dy) {
  return dy.cwiseProduct(x.unaryExpr([](double v) { return SiluGrad(v); }));
}

Tensor AvgPool2(const Tensor& x) {
  Tensor y(x.channels, x.rows / 2, x.cols / 2);
  for (int c = 0; c < y.channels; ++c) {
    for (int r = 0; r < y.rows; ++r) {
      for (int k = 0; k < y.cols; ++k) {
        y.at(c, r, k) = 0.25 * (x.at(c, 2 * r, 2 * k) + x.at(c, 2 * r, 2 * k + 1) +
                                x.at(c, 2 * r + 1, 2 * k) + x.at(c, 2 * r + 1, 2 * k + 1));
      }
    }
  }
  return y;
}

Tensor AvgPool2Backward(const Tensor& dy) {
  Tensor dx(dy.channels, dy.rows * 2, dy.cols * 2);
  for (int c = 0; c < dx.channels; ++c) {
    for (int r = 0; r < dx.rows; ++r) {
      for (int k = 0; k < dx.cols; ++k) dx.at(c, r, k) = 0.25 * dy.at(c, r / 2, k / 2);
    }
  }
  return dx;
}

Tensor Upsample2(const Tensor& x) {
  Tensor y(x.channels, x.rows * 2, x.cols * 2);
  for (int c = 0; c < y.channels; ++c) {
    for (int r = 0; r < y.rows; ++r) {
      for (int k = 0; k < y.cols; ++k) y.at(c, r, k) = x.at(c, r / 2, k / 2);
    }
  }
  return y;
}

Tensor Upsample2Backward(const Tensor& dy) {
  Tensor dx(dy.channels, dy.rows / 2, dy.cols / 2);
  for (int c = 0; c < dy.channels; ++c) {
    for (int r = 0; r < dy.rows; ++r) {
      for (int k = 0; k < dy.cols; ++k) dx.at(c, r / 2, k / 2) += dy.at(c, r, k);
    }
  }
  return dx;
}

Tensor Concat(const Tensor& a, const Tensor& b) {
  Tensor y(a.channels + b.channels, a.rows, a.cols);
  std::copy(a.data.begin(), a.data.end(), y.data.begin());
  std::copy(b.data.begin(), b.data.end(), y.data.begin() + a.size());
  return y;
}

void SplitChannels(const Tensor& dy, int first, Tensor* da, Tensor* db) {
  *da = Tensor(first, dy.rows, dy.cols);
  *db = Tensor(dy.channels - first, dy.rows, dy.cols);
  std::copy(dy.data.begin(), dy.data.begin() + da->size(), da->data.begin());
  std::copy(dy.data.begin() + da->size(), dy.data.end(), db->data.begin());
}

Mat PoolColumns(const Mat& x, int factor) {
  if (factor == 1) return x;
  Mat y = Mat::Zero(x.rows(), x.cols() / factor);
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    y.col(j) = x.middleCols(j * factor, factor).rowwise().mean();
  }
  return y;
}

Mat PoolColumnsBackward(const Mat& dy, int factor) {
  if (factor == 1) return dy;
  Mat dx(dy.rows(), dy.cols() * factor);
  for (Eigen::Index j = 0; j < dx.cols(); ++j) dx.col(j) = dy.col(j / factor) / factor;
  return dx;
}

void ResBlock::Init(ParamSet& ps, const std::string& name, int channels, int embed) {
  groups = GroupCount(channels);
  film1.Init(ps, name + ".film1", embed, channels);
  conv1.Init(ps, name + ".conv1", channels, channels);
  film2.Init(ps, name + ".film2", embed, channels);
  conv2.Init(ps, name + ".conv2", channels, channels);
}

Tensor ResBlock::Forward(const double* p, const Tensor& x, const Mat& emb, Cache* c) const {
  c->x = x;
  Tensor xh = GroupNorm(x, groups, &c->norm1);
  c->act1 = film1.Forward(p, xh, emb, &c->mod1);
  c->silu1 = Silu(c->act1);
  c->h1 = conv1.Forward(p, c->silu1);
  xh = GroupNorm(c->h1, groups, &c->norm2);
  c->act2 = film2.Forward(p, xh, emb, &c->mod2);
  c->silu2 = Silu(c->act2);
  Tensor y = conv2.Forward(p, c->silu2);
  for (size_t i = 0; i < y.size(); ++i) y.data[i] += x.data[i];
  return y;
}

Tensor ResBlock::Backward(const double* p, double* g, const Cache& c, const Mat& emb, const Tensor& dy,
                          Mat& demb) const {
  Tensor d = conv2.Backward(p, g, c.silu2, dy);
  d = SiluBackward(c.act2, d);
  d = film2.Backward(p, g, c.norm2.xhat, emb, c.mod2, d, demb);
  d = GroupNormBackward(c.norm2, groups, d);
  d = conv1.Backward(p, g, c.silu1, d);
  d = SiluBackward(c.act1, d);
  d = film1.Backward(p, g, c.norm1.xhat, emb, c.mod1, d, demb);
  d = GroupNormBackward(c.norm1, groups, d);
  for (size_t i = 0; i < d.size(); ++i) d.data[i] += dy.data[i];
  return d;
}

}  // namespace scenefoa::diffusion
