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

#include "scenefoa/diffusion/denoiser.h"

#include <cmath>
#include <string>

#include "scenefoa/core/error.h"

namespace scenefoa::diffusion {

int DenoiserConfig::BaseChannels() const { return static_cast<int>(std::lround(32.0 * width)); }

int DenoiserConfig::EmbedDim() const { return std::max(32, 4 * BaseChannels()); }

void DenoiserConfig::Validate() const {
  if (!(width > 0.0) || std::abs(32.0 * width - BaseChannels()) > 1e-9 || BaseChannels() < 2) {
    throw Error(ErrorCode::kOutOfRange, "width multiplier must give a whole channel count >= 2");
  }
  if (bins <= 0 || bins % kFrameMultiple != 0) {
    throw Error(ErrorCode::kOutOfRange, "latent bins must be a positive multiple of 8");
  }
  if (max_frames <= 0) throw Error(ErrorCode::kOutOfRange, "max_frames must be positive");
}

Eigen::VectorXd StepEmbedding(int t) {
  Eigen::VectorXd e(kTimeFeatures);
  constexpr int half = kTimeFeatures / 2;
  for (int i = 0; i < half; ++i) {
    const double freq = std::exp(-std::log(10000.0) * i / half);
    e[i] = std::sin(t * freq);
    e[half + i] = std::cos(t * freq);
  }
  return e;
}

struct Denoiser::Cache {
  Mat features, step, t1, t1s, enc_pre, enc, joined, gate, gated, emb_pre;
  std::vector<Mat> emb;
  Tensor x_t;
  double signal = 0.0;  // sqrt(abar)
  double noise = 1.0;   // sqrt(1 - abar)
  int frame_offset = 0;
  std::array<ResBlock::Cache, kUnetLevels> down;
  std::array<Tensor, kUnetLevels - 1> pooled;
  ResBlock::Cache mid;
  std::array<Tensor, kUnetLevels - 1> cat;
  std::array<ResBlock::Cache, kUnetLevels - 1> up;
  GroupNormCache out_norm;
  Mat out_mod, mix_in, mix;
  Tensor out_act, out_silu, unmixed;
};

Denoiser::Denoiser(const DenoiserConfig& config, const NoiseSchedule& schedule, uint64_t seed)
    : config_(config), schedule_(schedule) {
  config_.Validate();
  const int e = config_.EmbedDim();
  time1_.Init(params_, "time.fc1", kTimeFeatures, e);
  time2_.Init(params_, "time.fc2", e, e);
  encoder_.Init(params_, "cond.encoder", kCondFeatures, e);
  attention_.Init(params_, "cond.gate", e + kCondSources, e);
  cond_proj_.Init(params_, "cond.proj", e, e);
  conv_in_.Init(params_, "conv_in", 4, config_.Channels(0));
  for (int l = 0; l < kUnetLevels; ++l) {
    down_[l].Init(params_, "down" + std::to_string(l), config_.Channels(l), e);
    if (l + 1 < kUnetLevels) {
      down_conv_[l].Init(params_, "down" + std::to_string(l) + ".resample", config_.Channels(l),
                         config_.Channels(l + 1));
    }
  }
  mid_.Init(params_, "mid", config_.Channels(kUnetLevels - 1), e);
  for (int l = kUnetLevels - 2; l >= 0; --l) {
    up_conv_[l].Init(params_, "up" + std::to_string(l) + ".merge", config_.Channels(l + 1) + config_.Channels(l),
                     config_.Channels(l));
    up_[l].Init(params_, "up" + std::to_string(l), config_.Channels(l), e);
  }
  out_groups_ = GroupCount(config_.Channels(0));
  out_film_.Init(params_, "out.film", e, config_.Channels(0));
  conv_out_.Init(params_, "out.conv", config_.Channels(0), 4);
  out_mix_.Init(params_, "out.mix", kCondFeatures, 16);
  prior_ = params_.Add("prior", {4, config_.max_frames, config_.bins}, false);
  Initialize(seed);
}

void Denoiser::Initialize(uint64_t seed) {
  Rng rng(seed, "denoiser-init");
  for (const auto& spec : params_.specs()) {
    if (spec.shape.size() < 2 || spec.name == "prior" || spec.name.rfind("out.mix", 0) == 0) continue;
    const double fan_in = static_cast<double>(spec.size) / spec.shape[0];
    double scale = 1.0 / std::sqrt(fan_in);
    if (spec.name.find("film") != std::string::npos || spec.name.find("conv2") != std::string::npos ||
        spec.name.rfind("out.", 0) == 0) {
      scale *= 0.1;
    }
    FillNormal(params_, spec.offset, spec.size, scale, rng);
  }
}

Tensor Denoiser::Forward(const Tensor& x_t, int t, const ConditioningVector& c, int frame_offset,
                         Cache* k) const {
  const double* p = params_.values().data();
  const int frames = x_t.rows;
  if (x_t.channels != 4 || x_t.cols != config_.bins || frames % kFrameMultiple != 0) {
    throw Error(ErrorCode::kShapeMismatch, "denoiser input must be 4 x (multiple of 8) x bins");
  }
  if (c.frames() != frames || c.features.rows() != kCondFeatures || c.saliency.rows() != kCondSources) {
    throw Error(ErrorCode::kShapeMismatch, "conditioning frames do not match the latent");
  }
  const double abar = schedule_.alpha_bar(t);
  k->signal = std::sqrt(abar);
  k->noise = std::sqrt(1.0 - abar);
  k->frame_offset = frame_offset;
  k->x_t = x_t;

  // Step and conditioning embedding.
  k->step = StepEmbedding(t);
  k->t1 = time1_.Forward(p, k->step);
  k->t1s = Silu(k->t1);
  const Mat tau = time2_.Forward(p, k->t1s);
  k->features = c.features;
  k->enc_pre = encoder_.Forward(p, c.features);
  k->enc = Silu(k->enc_pre);
  k->joined.resize(k->enc.rows() + c.saliency.rows(), frames);
  k->joined << k->enc, c.saliency;
  k->gate = attention_.Forward(p, k->joined).unaryExpr([](double v) { return Sigmoid(v); });
  k->gated = k->gate.cwiseProduct(k->enc);
  k->emb_pre = cond_proj_.Forward(p, k->gated);
  k->emb_pre.colwise() += tau.col(0);
  const Mat emb0 = Silu(k->emb_pre);
  k->emb.resize(kUnetLevels);
  for (int l = 0; l < kUnetLevels; ++l) k->emb[l] = PoolColumns(emb0, 1 << l);

  // U-Net.
  Tensor h = conv_in_.Forward(p, x_t);
  std::array<Tensor, kUnetLevels> skip;
  for (int l = 0; l < kUnetLevels; ++l) {
    skip[l] = down_[l].Forward(p, h, k->emb[l], &k->down[l]);
    if (l + 1 < kUnetLevels) {
      k->pooled[l] = AvgPool2(skip[l]);
      h = down_conv_[l].Forward(p, k->pooled[l]);
    }
  }
  h = mid_.Forward(p, skip[kUnetLevels - 1], k->emb[kUnetLevels - 1], &k->mid);
  for (int l = kUnetLevels - 2; l >= 0; --l) {
    k->cat[l] = Concat(Upsample2(h), skip[l]);
    h = up_[l].Forward(p, up_conv_[l].Forward(p, k->cat[l]), k->emb[l], &k->up[l]);
  }
  const Tensor xh = GroupNorm(h, out_groups_, &k->out_norm);
  k->out_act = out_film_.Forward(p, xh, k->emb[0], &k->out_mod);
  k->out_silu = Silu(k->out_act);
  k->unmixed = conv_out_.Forward(p, k->out_silu);

  // Channel c of the output adds sum_j M[4c + j] * unmixed[j] per frame, with
  // M linear in the masked conditioning features.
  k->mix_in = c.features;
  k->mix = out_mix_.Forward(p, k->mix_in);
  Tensor x0 = k->unmixed;
  for (int ch = 0; ch < 4; ++ch) {
    for (int j = 0; j < 4; ++j) {
      for (int r = 0; r < frames; ++r) {
        const double m = k->mix(4 * ch + j, r);
        for (int b = 0; b < config_.bins; ++b) x0.at(ch, r, b) += m * k->unmixed.at(j, r, b);
      }
    }
  }

  // Clean estimate = prior + network output; convert to the noise estimate.
  const double* prior = p + prior_;
  Tensor eps(4, frames, config_.bins);
  for (int ch = 0; ch < 4; ++ch) {
    for (int r = 0; r < frames; ++r) {
      const int global = frame_offset + r;
      for (int b = 0; b < config_.bins; ++b) {
        double d = x0.at(ch, r, b);
        if (global < config_.max_frames) {
          d += prior[(static_cast<size_t>(ch) * config_.max_frames + global) * config_.bins + b];
        }
        eps.at(ch, r, b) = (x_t.at(ch, r, b) - k->signal * d) / k->noise;
      }
    }
  }
  return eps;
}

void Denoiser::Backward(const Cache& k, const Tensor& d_eps, double* g) const {
  const double* p = params_.values().data();
  const int frames = d_eps.rows;
  Tensor d = d_eps;
  const double factor = -k.signal / k.noise;
  for (double& v : d.data) v *= factor;
  double* gprior = g + prior_;
  for (int ch = 0; ch < 4; ++ch) {
    for (int r = 0; r < frames; ++r) {
      const int global = k.frame_offset + r;
      if (global >= config_.max_frames) continue;
      for (int b = 0; b < config_.bins; ++b) {
        gprior[(static_cast<size_t>(ch) * config_.max_frames + global) * config_.bins + b] += d.at(ch, r, b);
      }
    }
  }

  std::vector<Mat> demb(kUnetLevels);
  for (int l = 0; l < kUnetLevels; ++l) demb[l] = Mat::Zero(k.emb[l].rows(), k.emb[l].cols());

  Tensor dunmixed = d;
  Mat dmix = Mat::Zero(16, frames);
  for (int ch = 0; ch < 4; ++ch) {
    for (int j = 0; j < 4; ++j) {
      for (int r = 0; r < frames; ++r) {
        const double m = k.mix(4 * ch + j, r);
        double acc = 0.0;
        for (int b = 0; b < config_.bins; ++b) {
          dunmixed.at(j, r, b) += m * d.at(ch, r, b);
          acc += d.at(ch, r, b) * k.unmixed.at(j, r, b);
        }
        dmix(4 * ch + j, r) = acc;
      }
    }
  }
  out_mix_.Backward(p, g, k.mix_in, dmix);
  d = conv_out_.Backward(p, g, k.out_silu, dunmixed);
  d = SiluBackward(k.out_act, d);
  d = out_film_.Backward(p, g, k.out_norm.xhat, k.emb[0], k.out_mod, d, demb[0]);
  d = GroupNormBackward(k.out_norm, out_groups_, d);

  std::array<Tensor, kUnetLevels - 1> dskip;
  for (int l = 0; l + 1 < kUnetLevels; ++l) {
    d = up_[l].Backward(p, g, k.up[l], k.emb[l], d, demb[l]);
    d = up_conv_[l].Backward(p, g, k.cat[l], d);
    Tensor dup;
    SplitChannels(d, config_.Channels(l + 1), &dup, &dskip[l]);
    d = Upsample2Backward(dup);
  }
  d = mid_.Backward(p, g, k.mid, k.emb[kUnetLevels - 1], d, demb[kUnetLevels - 1]);
  for (int l = kUnetLevels - 1; l >= 0; --l) {
    if (l + 1 < kUnetLevels) {
      for (size_t i = 0; i < d.size(); ++i) d.data[i] += dskip[l].data[i];
    }
    d = down_[l].Backward(p, g, k.down[l], k.emb[l], d, demb[l]);
    if (l > 0) {
      d = down_conv_[l - 1].Backward(p, g, k.pooled[l - 1], d);
      d = AvgPool2Backward(d);
    }
  }
  conv_in_.Backward(p, g, k.x_t, d);

  // Embedding branch.
  Mat de0 = Mat::Zero(k.emb_pre.rows(), k.emb_pre.cols());
  for (int l = 0; l < kUnetLevels; ++l) de0 += PoolColumnsBackward(demb[l], 1 << l);
  const Mat de_pre = SiluBackward(k.emb_pre, de0);
  const Mat dtau = de_pre.rowwise().sum();
  const Mat dgated = cond_proj_.Backward(p, g, k.gated, de_pre);
  Mat denc = dgated.cwiseProduct(k.gate);
  const Mat dgate_pre =
      dgated.cwiseProduct(k.enc).cwiseProduct(k.gate).cwiseProduct((1.0 - k.gate.array()).matrix());
  const Mat djoined = attention_.Backward(p, g, k.joined, dgate_pre);
  denc += djoined.topRows(k.enc.rows());
  encoder_.Backward(p, g, k.features, SiluBackward(k.enc_pre, denc));
  const Mat dt1s = time2_.Backward(p, g, k.t1s, dtau);
  time1_.Backward(p, g, k.step, SiluBackward(k.t1, dt1s));
}

Tensor Denoiser::PredictEpsilon(const Tensor& x_t, int t, const ConditioningVector& c, int frame_offset) const {
  if (x_t.channels != 4 || x_t.cols != config_.bins || c.frames() != x_t.rows) {
    throw Error(ErrorCode::kShapeMismatch, "latent and conditioning shapes do not match the denoiser");
  }
  const int frames = x_t.rows;
  const int padded = (frames + kFrameMultiple - 1) / kFrameMultiple * kFrameMultiple;
  Cache cache;
  if (padded == frames) return Forward(x_t, t, c, frame_offset, &cache);
  Tensor x(4, padded, x_t.cols);
  for (int ch = 0; ch < 4; ++ch) {
    std::copy_n(x_t.data.begin() + static_cast<size_t>(ch) * x_t.plane(), x_t.plane(),
                x.data.begin() + static_cast<size_t>(ch) * x.plane());
  }
  const Tensor full = Forward(x, t, c.PadTo(padded), frame_offset, &cache);
  Tensor eps(4, frames, x_t.cols);
  for (int ch = 0; ch < 4; ++ch) {
    std::copy_n(full.data.begin() + static_cast<size_t>(ch) * full.plane(), eps.plane(),
                eps.data.begin() + static_cast<size_t>(ch) * eps.plane());
  }
  return eps;
}

double Denoiser::Loss(const Tensor& x0, const ConditioningVector& c, int t, const Tensor& eps, int frame_offset,
                      double* grad) const {
  const Tensor x_t = schedule_.QSample(x0, t, eps);
  Cache cache;
  const Tensor pred = Forward(x_t, t, c, frame_offset, &cache);
  const double n = static_cast<double>(pred.size());
  double loss = 0.0;
  Tensor d_eps(pred.channels, pred.rows, pred.cols);
  for (size_t i = 0; i < pred.size(); ++i) {
    const double r = pred.data[i] - eps.data[i];
    loss += r * r;
    d_eps.data[i] = 2.0 * r / n;
  }
  loss /= n;
  if (grad && std::isfinite(loss)) Backward(cache, d_eps, grad);
  return loss;
}

}  // namespace scenefoa::diffusion
