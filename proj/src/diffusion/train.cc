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

#include "scenefoa/diffusion/train.h"

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

#include "json.hpp"
#include "scenefoa/core/error.h"
#include "scenefoa/core/parallel.h"
#include "scenefoa/diffusion/sampler.h"

namespace scenefoa::diffusion {

void TrainConfig::Validate() const {
  if (batch_size < 1 || steps < 1 || !(learning_rate > 0.0) || crop_frames < kFrameMultiple ||
      crop_frames % kFrameMultiple != 0 || weight_decay < 0.0 || !(grad_clip > 0.0) ||
      final_lr_fraction < 0.0 || final_lr_fraction > 1.0 || noise_steps < 1 || !(prior_lr_scale > 0.0) ||
      !(snr_gamma >= 0.0)) {
    throw Error(ErrorCode::kOutOfRange, "invalid training configuration");
  }
  if (sampler_steps < 1 || sampler_steps > noise_steps) {
    throw Error(ErrorCode::kOutOfRange, "sampler steps outside [1, T]");
  }
}

std::vector<TrainExample> PrepareExamples(const std::vector<TrainingPair>& data, ConditioningMode mode,
                                          foa::ChannelStats* stats) {
  if (data.empty()) throw Error(ErrorCode::kEmptyInput, "training set is empty");
  const LatentCodec codec;
  std::vector<LatentClip> latents;
  latents.reserve(data.size());
  for (const auto& pair : data) {
    const int frames = std::max(GenerationFrames(pair.reference.frames()), kFrameMultiple);
    auto ch = pair.reference.channels();
    for (auto& c : ch) c.resize(static_cast<size_t>(frames) * kCodecHop, 0.0);
    latents.push_back(codec.Encode(foa::FoaClip(std::move(ch), pair.reference.sample_rate())));
  }
  *stats = LatentCodec::Statistics(latents);
  std::vector<TrainExample> out;
  out.reserve(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    LatentCodec::Standardize(latents[i], *stats);
    const int frames = latents[i].tensor.rows;
    out.push_back({std::move(latents[i].tensor), BuildConditioning(data[i].descriptors, mode, frames)});
  }
  return out;
}

std::vector<BatchItem> DrawBatch(const std::vector<TrainExample>& examples, const TrainConfig& cfg,
                                 const NoiseSchedule& schedule, int step) {
  std::vector<BatchItem> batch(cfg.batch_size);
  for (int i = 0; i < cfg.batch_size; ++i) {
    Rng rng(cfg.seed, "train/" + std::to_string(step) + "/" + std::to_string(i));
    BatchItem& item = batch[i];
    item.example = &examples[rng.UniformInt(0, static_cast<int>(examples.size()) - 1)];
    const int total = item.example->latent.rows;
    item.frames = std::min(cfg.crop_frames, total);
    item.offset = rng.UniformInt(0, total - item.frames);
    item.t = rng.UniformInt(1, schedule.steps());
    if (cfg.snr_gamma > 0.0) {
      const double abar = schedule.alpha_bar(item.t);
      const double snr = abar / (1.0 - abar);
      item.weight = std::min(snr, cfg.snr_gamma) / snr;
    }
    item.eps = Tensor(4, item.frames, item.example->latent.cols);
    for (double& v : item.eps.data) v = rng.Normal();
  }
  return batch;
}

namespace {

Tensor CropRows(const Tensor& x, int offset, int count) {
  if (offset == 0 && count == x.rows) return x;
  Tensor y(x.channels, count, x.cols);
  for (int c = 0; c < x.channels; ++c) {
    std::copy_n(x.data.begin() + (static_cast<size_t>(c) * x.rows + offset) * x.cols,
                static_cast<size_t>(count) * x.cols, y.data.begin() + static_cast<size_t>(c) * count * x.cols);
  }
  return y;
}

double ItemLoss(const Denoiser& model, const BatchItem& item, Buffer& grad) {
  const Tensor x0 = CropRows(item.example->latent, item.offset, item.frames);
  const double loss = model.Loss(x0, item.example->cond.Slice(item.offset, item.frames), item.t, item.eps,
                                 item.offset, grad.data());
  if (item.weight != 1.0) {
    for (double& g : grad) g *= item.weight;
  }
  return loss;
}

double Finish(const std::vector<BatchItem>& batch, std::vector<double> losses, std::vector<Buffer> parts,
              Buffer* grad, double* mse) {
  const double n = static_cast<double>(losses.size());
  *grad = parallel::TreeSumBuffers(std::move(parts));
  for (double& g : *grad) g /= n;
  if (mse) *mse = parallel::TreeSum(losses) / n;
  for (size_t i = 0; i < batch.size(); ++i) losses[i] *= batch[i].weight;
  return parallel::TreeSum(losses) / n;
}

}  // namespace

double BatchGradient(const Denoiser& model, const std::vector<BatchItem>& batch, Buffer* grad, double* mse) {
  const int n = static_cast<int>(batch.size());
  std::vector<double> losses(n);
  std::vector<Buffer> parts(n, Buffer(model.params().size(), 0.0));
#pragma omp parallel for schedule(dynamic, 1) num_threads(parallel::Threads())
  for (int i = 0; i < n; ++i) losses[i] = ItemLoss(model, batch[i], parts[i]);
  return Finish(batch, std::move(losses), std::move(parts), grad, mse);
}

double BatchGradientSerial(const Denoiser& model, const std::vector<BatchItem>& batch, Buffer* grad,
                           double* mse) {
  const int n = static_cast<int>(batch.size());
  std::vector<double> losses(n);
  std::vector<Buffer> parts(n, Buffer(model.params().size(), 0.0));
  for (int i = 0; i < n; ++i) losses[i] = ItemLoss(model, batch[i], parts[i]);
  return Finish(batch, std::move(losses), std::move(parts), grad, mse);
}

AdamW::AdamW(size_t size, double weight_decay) : weight_decay_(weight_decay), m_(size, 0.0), v_(size, 0.0) {}

void AdamW::Step(ParamSet& params, const Buffer& grad, double lr) {
  if (decay_.empty()) {
    decay_.assign(params.size(), 0);
    scale_.assign(params.size(), 1.0);
    for (const auto& s : params.specs()) {
      std::fill_n(decay_.begin() + s.offset, s.size, s.decay ? 1 : 0);
      std::fill_n(scale_.begin() + s.offset, s.size, s.lr_scale);
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto& w = params.values();
  for (size_t i = 0; i < w.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    double update = (m_[i] / c1) / (std::sqrt(v_[i] / c2) + epsilon_);
    if (decay_[i]) update += weight_decay_ * w[i];
    w[i] -= lr * scale_[i] * update;
  }
}

TrainResult Train(const std::vector<TrainingPair>& data, const TrainConfig& cfg, std::ostream* log) {
  cfg.Validate();
  foa::ChannelStats stats;
  const auto examples = PrepareExamples(data, cfg.mode, &stats);
  return TrainOnExamples(examples, stats, cfg, log);
}

TrainResult TrainOnExamples(const std::vector<TrainExample>& examples, const foa::ChannelStats& stats,
                            const TrainConfig& cfg, std::ostream* log) {
  cfg.Validate();
  if (examples.empty()) throw Error(ErrorCode::kEmptyInput, "training set is empty");
  DenoiserConfig dc;
  dc.width = cfg.width;
  dc.bins = examples.front().latent.cols;
  dc.mode = cfg.mode;
  dc.max_frames = 0;
  for (const auto& e : examples) dc.max_frames = std::max(dc.max_frames, e.latent.rows);
  const NoiseSchedule schedule(cfg.noise_steps);
  TrainResult result{Denoiser(dc, schedule, cfg.seed), {}, 0.0};
  Denoiser& model = result.model;
  model.set_stats(stats);
  model.params().SetLearningRateScale("prior", cfg.prior_lr_scale);

  AdamW opt(model.params().size(), cfg.weight_decay);
  Buffer previous = model.params().values();
  AdamW previous_opt = opt;
  double lr_scale = 1.0;
  bool retried = false;
  const auto start = std::chrono::steady_clock::now();
  Buffer grad;
  double tail_sum = 0.0;
  int tail_count = 0;
  const int tail_begin = cfg.steps - std::max(1, cfg.steps / 10);

  for (int step = 0; step < cfg.steps; ++step) {
    const double progress = cfg.steps > 1 ? static_cast<double>(step) / (cfg.steps - 1) : 1.0;
    const double cosine = 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
    const double lr =
        lr_scale * cfg.learning_rate * (cfg.final_lr_fraction + (1.0 - cfg.final_lr_fraction) * cosine);
    const auto batch = DrawBatch(examples, cfg, schedule, step);
    double loss = 0.0;
    const double objective = BatchGradient(model, batch, &grad, &loss);
    if (!std::isfinite(objective)) {
      if (retried) {
        throw Error(ErrorCode::kNumericalDivergence,
                    "non-finite loss at step " + std::to_string(step) + " after halving the learning rate");
      }
      retried = true;
      lr_scale *= 0.5;
      model.params().values() = previous;
      opt = previous_opt;
      --step;
      continue;
    }
    double norm = 0.0;
    for (double g : grad) norm += g * g;
    norm = std::sqrt(norm);
    if (norm > cfg.grad_clip) {
      for (double& g : grad) g *= cfg.grad_clip / norm;
    }
    previous = model.params().values();
    previous_opt = opt;
    opt.Step(model.params(), grad, lr);

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    result.log.push_back({step, loss, objective, lr, wall_ms});
    if (log) {
      *log << nlohmann::json{{"step", step}, {"loss", loss}, {"objective", objective}, {"lr", lr}, {"wall_ms", wall_ms}}
                  .dump()
           << '\n';
    }
    if (step >= tail_begin) {
      tail_sum += loss;
      ++tail_count;
    }
  }
  result.final_loss = tail_count ? tail_sum / tail_count : 0.0;
  return result;
}

}  // namespace scenefoa::diffusion
