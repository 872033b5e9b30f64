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

#include "scenefoa/acoustics/render.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

#include "scenefoa/acoustics/ir.h"
#include "scenefoa/acoustics/paths.h"
#include "scenefoa/acoustics/reverb.h"
#include "scenefoa/core/error.h"
#include "scenefoa/core/parallel.h"
#include "scenefoa/core/random.h"
#include "scenefoa/dsp/band_bank.h"
#include "scenefoa/dsp/fft.h"
#include "scenefoa/scene/tracks.h"

namespace scenefoa::acoustics {

namespace {

using Buffer = std::array<std::vector<double>, 4>;

struct PathTerm {
  long delay = 0;
  Bands gain{};
  bool flat = false;  // all band gains equal
  Vec3 world_direction = Vec3::UnitX();
};

struct Grid {
  size_t frames = 0;
  size_t hop = 0;
  size_t blocks = 0;  // boundaries 0..blocks
  std::vector<scene::SceneState> states;
};

Grid MakeGrid(const scene::SceneManifest& m, const RenderOptions& opts) {
  Grid g;
  g.frames = m.frame_count();
  g.hop = std::max<size_t>(1, static_cast<size_t>(std::lround(opts.block_seconds * m.sample_rate)));
  g.blocks = (g.frames + g.hop - 1) / g.hop;
  for (size_t k = 0; k <= g.blocks; ++k) {
    const double t = std::min(static_cast<double>(k * g.hop) / m.sample_rate, m.duration);
    g.states.push_back(scene::SampleTracks(m, t));
  }
  return g;
}

std::vector<PathTerm> ComputeTerms(const scene::SceneManifest& m, const Vec3& source,
                                   const Vec3& listener, int order) {
  std::vector<PathTerm> terms;
  std::vector<PropagationPath> paths;
  try {
    paths = ImageSources(m, source, listener, order);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDegenerateRay) throw;
    spdlog::warn("skipping source block: {}", e.what());
    return terms;
  }
  for (const auto& p : paths) {
    PathTerm t;
    t.delay = p.delay;
    t.gain = PathGain(p, m.air_attenuation);
    if (std::all_of(t.gain.begin(), t.gain.end(), [](double g) { return g == 0.0; })) continue;
    t.flat = std::all_of(t.gain.begin(), t.gain.end(), [&](double g) { return g == t.gain[0]; });
    t.world_direction = p.arrival.UnitVector();
    terms.push_back(t);
  }
  return terms;
}

std::vector<double> GatedSignal(const scene::SourceTrack& src, size_t frames, int rate) {
  std::vector<double> x(frames, 0.0);
  for (size_t n = 0; n < frames && n < src.dry_signal.size(); ++n) {
    if (scene::InterpolateActivity(src.active, static_cast<double>(n) / rate)) x[n] = src.dry_signal[n];
  }
  return x;
}

// Adds block k's early reflections, weighted by its triangular window.
void RenderBlock(const Grid& g, size_t k, const std::vector<PathTerm>& terms,
                 const foa::Rotation& head, const std::vector<double>& dry,
                 const std::array<std::vector<double>, dsp::kBandCount>& bands, Buffer& out) {
  const long centre = static_cast<long>(k * g.hop);
  const long lo = std::max<long>(0, centre - static_cast<long>(g.hop) + 1);
  const long hi = std::min<long>(static_cast<long>(g.frames), centre + static_cast<long>(g.hop));
  if (lo >= hi) return;
  const foa::Rotation to_head = head.Inverse();
  std::vector<double> mix(hi - lo);
  for (const auto& t : terms) {
    const Vec3 u = to_head.Apply(t.world_direction);
    const std::array<double, 4> enc = {1.0, u.x(), u.y(), u.z()};
    for (long n = lo; n < hi; ++n) {
      const long src = n - t.delay;
      double v = 0.0;
      if (src >= 0) {
        if (t.flat) {
          v = t.gain[0] * dry[src];
        } else {
          for (int b = 0; b < dsp::kBandCount; ++b) v += t.gain[b] * bands[b][src];
        }
      }
      const double w = 1.0 - std::abs(static_cast<double>(n - centre)) / g.hop;
      mix[n - lo] = w * v;
    }
    for (int c = 0; c < 4; ++c) {
      for (long n = lo; n < hi; ++n) out[c][n] += enc[c] * mix[n - lo];
    }
  }
}

// Anchor block per boundary: paths are recomputed only when the source or
// listener has moved more than reuse_distance since the anchor.
std::vector<size_t> Anchors(const Grid& g, size_t s, double reuse) {
  std::vector<size_t> anchor(g.blocks + 1, 0);
  size_t a = 0;
  for (size_t k = 1; k <= g.blocks; ++k) {
    const auto& now = g.states[k];
    const auto& then = g.states[a];
    if ((now.sources[s].position - then.sources[s].position).norm() > reuse ||
        (now.listener_position - then.listener_position).norm() > reuse) {
      a = k;
    }
    anchor[k] = a;
  }
  return anchor;
}

Buffer RenderSource(const scene::SceneManifest& m, const RenderOptions& opts, const Grid& g,
                    size_t s, bool parallel) {
  const int order = opts.max_order < 0 ? DefaultOrder(m) : opts.max_order;
  const auto dry = GatedSignal(m.sources[s], g.frames, m.sample_rate);
  const auto bands = dsp::OctaveBandBank::ForRate(m.sample_rate).Split(dry);
  const auto anchor = Anchors(g, s, opts.reuse_distance);
  std::vector<size_t> unique;
  for (size_t k = 0; k <= g.blocks; ++k) {
    if (anchor[k] == k) unique.push_back(k);
  }
  std::vector<std::vector<PathTerm>> terms(g.blocks + 1);
  const long count = static_cast<long>(unique.size());
#pragma omp parallel for schedule(dynamic) num_threads(parallel::Threads()) if (parallel)
  for (long i = 0; i < count; ++i) {
    const size_t k = unique[i];
    terms[k] = ComputeTerms(m, g.states[k].sources[s].position, g.states[k].listener_position, order);
  }

  Buffer out;
  for (auto& c : out) c.assign(g.frames, 0.0);
  if (parallel) {
    // Even then odd boundaries: windows within one parity never overlap.
    for (size_t parity = 0; parity < 2; ++parity) {
      const long n_blocks = static_cast<long>((g.blocks + 2 - parity) / 2);
#pragma omp parallel for schedule(static) num_threads(parallel::Threads())
      for (long i = 0; i < n_blocks; ++i) {
        const size_t k = parity + 2 * i;
        RenderBlock(g, k, terms[anchor[k]], g.states[k].listener_orientation, dry, bands, out);
      }
    }
  } else {
    for (size_t k = 0; k <= g.blocks; ++k) {
      RenderBlock(g, k, terms[anchor[k]], g.states[k].listener_orientation, dry, bands, out);
    }
  }

  if (opts.late_tail) {
    const Bands energy = RoomDiffuseEnergy(m);
    if (std::any_of(energy.begin(), energy.end(), [](double e) { return e > 0.0; })) {
      std::vector<PropagationPath> early;
      try {
        early = ImageSources(m, g.states[0].sources[s].position, g.states[0].listener_position, order);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDegenerateRay) throw;
      }
      const ReverbProfile profile = ReverbT60(m, early);
      auto tail = LateTail(profile, energy, m.sample_rate,
                           DeriveSeed(m.seed, "source/" + m.sources[s].id));
      const auto wet = dsp::ConvolveMany(dry, std::vector<std::vector<double>>(tail.begin(), tail.end()));
      for (int c = 0; c < 4; ++c) {
        for (size_t n = 0; n < g.frames; ++n) out[c][n] += wet[c][n];
      }
    }
  }
  return out;
}

foa::FoaClip Render(const scene::SceneManifest& m, const RenderOptions& opts, bool parallel) {
  const Grid g = MakeGrid(m, opts);
  std::array<std::vector<std::vector<double>>, 4> parts;
  for (size_t s = 0; s < m.sources.size(); ++s) {
    Buffer b = RenderSource(m, opts, g, s, parallel);
    for (int c = 0; c < 4; ++c) parts[c].push_back(std::move(b[c]));
  }
  foa::FoaClip::Channels ch;
  for (int c = 0; c < 4; ++c) {
    ch[c] = parts[c].empty() ? std::vector<double>(g.frames, 0.0) : parallel::TreeSum(std::move(parts[c]));
  }
  return foa::FoaClip(std::move(ch), m.sample_rate);
}

}  // namespace

foa::FoaClip RenderReference(const scene::SceneManifest& m, const RenderOptions& opts) {
  return Render(m, opts, true);
}

foa::FoaClip RenderReferenceSerial(const scene::SceneManifest& m, const RenderOptions& opts) {
  return Render(m, opts, false);
}

}  // namespace scenefoa::acoustics
