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

#include "scenefoa/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "scenefoa/core/error.h"
#include "scenefoa/dsp/fft.h"
#include "scenefoa/foa/ops.h"

namespace scenefoa::metrics {

namespace {

void CheckSameShape(const foa::FoaClip& ref, const foa::FoaClip& gen) {
  if (ref.frames() != gen.frames() || ref.sample_rate() != gen.sample_rate()) {
    throw Error(ErrorCode::kShapeMismatch,
                "clips differ in length or rate: " + std::to_string(ref.frames()) + " vs " +
                    std::to_string(gen.frames()));
  }
}

double Cap(double db) { return std::clamp(db, -kDbCap, kDbCap); }

double Db(double num, double den) {
  if (den <= 0.0) return num > 0.0 ? kDbCap : -kDbCap;
  if (num <= 0.0) return -kDbCap;
  return Cap(10.0 * std::log10(num / den));
}

}  // namespace

double DoaError(const foa::FoaClip& ref, const foa::FoaClip& gen) {
  CheckSameShape(ref, gen);
  const auto window = static_cast<size_t>(std::lround(kDoaWindowSeconds * ref.sample_rate()));
  std::map<size_t, foa::Direction> ref_dirs;
  for (const auto& f : foa::EstimateDoa(ref, window)) ref_dirs[f.window_index] = f.direction;
  double sum = 0.0;
  size_t count = 0;
  for (const auto& f : foa::EstimateDoa(gen, window)) {
    auto it = ref_dirs.find(f.window_index);
    if (it == ref_dirs.end()) continue;
    sum += foa::AngularDistance(it->second, f.direction);
    ++count;
  }
  if (count == 0) throw Error(ErrorCode::kNoActivity, "no window is active in both clips");
  return sum / count;
}

double Snr(const foa::FoaClip& ref, const foa::FoaClip& gen) {
  CheckSameShape(ref, gen);
  double signal = 0.0, noise = 0.0;
  for (int c = 0; c < 4; ++c) {
    const auto& r = ref.channels()[c];
    const auto& g = gen.channels()[c];
    for (size_t i = 0; i < r.size(); ++i) {
      signal += r[i] * r[i];
      noise += (r[i] - g[i]) * (r[i] - g[i]);
    }
  }
  if (signal <= 0.0) throw Error(ErrorCode::kUndefinedMetric, "SNR of a silent reference");
  return Db(signal, noise);
}

double SiSdr(const foa::FoaClip& ref, const foa::FoaClip& gen) {
  CheckSameShape(ref, gen);
  double sum = 0.0;
  int used = 0;
  for (int c = 0; c < 4; ++c) {
    const auto& r = ref.channels()[c];
    const auto& g = gen.channels()[c];
    double rr = 0.0, gr = 0.0;
    for (size_t i = 0; i < r.size(); ++i) {
      rr += r[i] * r[i];
      gr += g[i] * r[i];
    }
    if (rr <= 0.0) continue;
    const double alpha = gr / rr;
    double ss = 0.0, ee = 0.0;
    for (size_t i = 0; i < r.size(); ++i) {
      const double s = alpha * r[i];
      ss += s * s;
      ee += (g[i] - s) * (g[i] - s);
    }
    sum += Db(ss, ee);
    ++used;
  }
  if (used == 0) throw Error(ErrorCode::kUndefinedMetric, "SI-SDR with an all-silent reference");
  return sum / used;
}

double EdtFromSignal(const std::vector<double>& w, int sample_rate) {
  const size_t frame = static_cast<size_t>(sample_rate / 100);
  const size_t frames = w.size() / frame;
  if (frames == 0) throw Error(ErrorCode::kUndefinedMetric, "clip shorter than one frame");
  std::vector<double> energy(frames, 0.0);
  for (size_t f = 0; f < frames; ++f) {
    for (size_t i = f * frame; i < (f + 1) * frame; ++i) energy[f] += w[i] * w[i];
  }
  const double loudest = *std::max_element(energy.begin(), energy.end());
  if (loudest <= 0.0) throw Error(ErrorCode::kUndefinedMetric, "silent clip has no decay");
  const double active = loudest * 1e-2;  // -20 dB
  size_t last = frames - 1;
  while (energy[last] < active) --last;
  size_t first = last;
  while (first > 0 && energy[first - 1] >= active) --first;
  const double run_max = *std::max_element(energy.begin() + first, energy.begin() + last + 1);
  size_t peak = last;
  while (energy[peak] < run_max * std::pow(10.0, -0.3)) --peak;

  const size_t start = (peak + 1) * frame;
  if (w.size() < start + static_cast<size_t>(0.05 * sample_rate)) {
    throw Error(ErrorCode::kUndefinedMetric, "decay segment shorter than 50 ms");
  }
  // Schroeder backward integration.
  std::vector<double> edc(w.size() - start);
  double acc = 0.0;
  for (size_t i = w.size(); i-- > start;) {
    acc += w[i] * w[i];
    edc[i - start] = acc;
  }
  if (acc <= 0.0) throw Error(ErrorCode::kUndefinedMetric, "no energy after the activity peak");
  // Least squares on the 0 .. -10 dB part.
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  size_t n = 0;
  for (; n < edc.size(); ++n) {
    const double db = 10.0 * std::log10(edc[n] / acc);
    if (db < -10.0) break;
    const double t = static_cast<double>(n) / sample_rate;
    st += t;
    sy += db;
    stt += t * t;
    sty += t * db;
  }
  if (n == edc.size() || n < 10) {
    throw Error(ErrorCode::kUndefinedMetric, "decay curve does not fall by 10 dB");
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  if (!(slope < 0.0)) throw Error(ErrorCode::kUndefinedMetric, "decay curve is not decreasing");
  return -60.0 / slope;
}

double Edt(const foa::FoaClip& clip) {
  return EdtFromSignal(clip.channel(foa::Channel::kW), clip.sample_rate());
}

double EdtDiff(const foa::FoaClip& ref, const foa::FoaClip& gen) {
  return std::abs(Edt(ref) - Edt(gen));
}

std::vector<std::vector<double>> MagnitudeSpectrogram(const std::vector<double>& x, size_t window,
                                                      size_t hop) {
  std::vector<double> hann(window);
  for (size_t i = 0; i < window; ++i) {
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / window);
  }
  const size_t frames = x.size() <= window ? 1 : (x.size() - window) / hop + 1;
  std::vector<std::vector<double>> out(frames);
  std::vector<double> buf(window);
  for (size_t f = 0; f < frames; ++f) {
    for (size_t i = 0; i < window; ++i) {
      const size_t n = f * hop + i;
      buf[i] = n < x.size() ? x[n] * hann[i] : 0.0;
    }
    const auto spec = dsp::Rfft(buf, window);
    out[f].resize(spec.size());
    for (size_t k = 0; k < spec.size(); ++k) out[f][k] = std::abs(spec[k]);
  }
  return out;
}

double StftError(const foa::FoaClip& ref, const foa::FoaClip& gen) {
  CheckSameShape(ref, gen);
  double diff = 0.0, mag = 0.0;
  for (int c = 0; c < 4; ++c) {
    const auto r = MagnitudeSpectrogram(ref.channels()[c]);
    const auto g = MagnitudeSpectrogram(gen.channels()[c]);
    for (size_t f = 0; f < r.size(); ++f) {
      for (size_t k = 0; k < r[f].size(); ++k) {
        diff += std::abs(r[f][k] - g[f][k]);
        mag += r[f][k];
      }
    }
  }
  if (mag <= 0.0) throw Error(ErrorCode::kUndefinedMetric, "STFT error of a silent reference");
  return diff / mag;
}

}  // namespace scenefoa::metrics
