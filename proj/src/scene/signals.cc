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

#include "scenefoa/scene/signals.h"

#include <cmath>
#include <numbers>

#include "scenefoa/core/error.h"
#include "scenefoa/core/random.h"

namespace scenefoa::scene {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Band-limited Gaussian noise: one-pole high-pass at lo, two one-pole
// low-passes at hi, scaled to standard deviation `sd`.
std::vector<double> BandNoise(Rng& rng, size_t n, int rate, double lo, double hi, double sd) {
  std::vector<double> x(n);
  const double a_hp = std::exp(-kTwoPi * lo / rate);
  const double a_lp = std::exp(-kTwoPi * std::min(hi, 0.45 * rate) / rate);
  double hp_prev_in = 0.0, hp_prev_out = 0.0, lp1 = 0.0, lp2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double w = rng.Normal();
    const double hp = a_hp * (hp_prev_out + w - hp_prev_in);
    hp_prev_in = w;
    hp_prev_out = hp;
    lp1 = (1.0 - a_lp) * hp + a_lp * lp1;
    lp2 = (1.0 - a_lp) * lp1 + a_lp * lp2;
    x[i] = lp2;
  }
  double var = 0.0;
  for (double v : x) var += v * v;
  var /= std::max<size_t>(n, 1);
  const double g = var > 0.0 ? sd / std::sqrt(var) : 0.0;
  for (double& v : x) v *= g;
  return x;
}

const char* KindName(SignalKind k) {
  switch (k) {
    case SignalKind::kTone: return "tone";
    case SignalKind::kChirp: return "chirp";
    case SignalKind::kNoiseBurst: return "noise_burst";
    case SignalKind::kNoise: return "noise";
  }
  return "noise";
}

}  // namespace

std::vector<double> Synthesize(const ProceduralSignal& spec, int rate, size_t frames) {
  std::vector<double> out(frames, 0.0);
  Rng rng(spec.seed, "signal");
  switch (spec.kind) {
    case SignalKind::kTone: {
      for (size_t i = 0; i < frames; ++i) {
        out[i] = spec.amplitude * std::sin(kTwoPi * spec.freq * static_cast<double>(i) / rate);
      }
      break;
    }
    case SignalKind::kChirp: {
      // Repeating one-second exponential sweeps.
      const double period = 1.0;
      const double k = std::log(spec.freq_end / spec.freq) / period;
      for (size_t i = 0; i < frames; ++i) {
        const double t = std::fmod(static_cast<double>(i) / rate, period);
        const double phase = kTwoPi * spec.freq * (std::exp(k * t) - 1.0) / k;
        out[i] = spec.amplitude * std::sin(phase);
      }
      break;
    }
    case SignalKind::kNoiseBurst: {
      const auto noise = BandNoise(rng, frames, rate, spec.band_lo, spec.band_hi, spec.amplitude / 3.0);
      const double period = spec.burst_s + spec.gap_s;
      for (size_t i = 0; i < frames; ++i) {
        const double t = std::fmod(static_cast<double>(i) / rate, period);
        out[i] = t < spec.burst_s ? noise[i] : 0.0;
      }
      break;
    }
    case SignalKind::kNoise:
      out = BandNoise(rng, frames, rate, spec.band_lo, spec.band_hi, spec.amplitude / 3.0);
      break;
  }
  // 5 ms fade-in so onsets do not click.
  const size_t fade = std::min<size_t>(frames, static_cast<size_t>(0.005 * rate));
  for (size_t i = 0; i < fade; ++i) out[i] *= static_cast<double>(i) / fade;
  return out;
}

nlohmann::json ToJson(const ProceduralSignal& s) {
  return {{"kind", KindName(s.kind)}, {"seed", s.seed},        {"amplitude", s.amplitude},
          {"freq", s.freq},           {"freq_end", s.freq_end}, {"burst_s", s.burst_s},
          {"gap_s", s.gap_s},         {"band", {s.band_lo, s.band_hi}}};
}

ProceduralSignal ProceduralFromJson(const nlohmann::json& j) {
  ProceduralSignal s;
  const std::string kind = j.value("kind", "noise");
  if (kind == "tone") {
    s.kind = SignalKind::kTone;
  } else if (kind == "chirp") {
    s.kind = SignalKind::kChirp;
  } else if (kind == "noise_burst") {
    s.kind = SignalKind::kNoiseBurst;
  } else if (kind == "noise") {
    s.kind = SignalKind::kNoise;
  } else {
    throw Error(ErrorCode::kManifestSyntax, "unknown procedural signal kind '" + kind + "'");
  }
  s.seed = j.value("seed", uint64_t{0});
  s.amplitude = j.value("amplitude", s.amplitude);
  s.freq = j.value("freq", s.freq);
  s.freq_end = j.value("freq_end", s.freq_end);
  s.burst_s = j.value("burst_s", s.burst_s);
  s.gap_s = j.value("gap_s", s.gap_s);
  if (j.contains("band")) {
    s.band_lo = j["band"].at(0).get<double>();
    s.band_hi = j["band"].at(1).get<double>();
  }
  return s;
}

}  // namespace scenefoa::scene
