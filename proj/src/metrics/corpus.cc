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

#include "scenefoa/metrics/corpus.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "scenefoa/core/error.h"
#include "scenefoa/core/parallel.h"
#include "scenefoa/foa/wav_io.h"
#include "scenefoa/metrics/distribution.h"
#include "scenefoa/metrics/metrics.h"

namespace scenefoa::metrics {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ClipResult {
  ClipMetrics metrics;
  std::array<double, kBandEnergyDims> ref_energy{};
  std::array<double, kBandEnergyDims> gen_energy{};
  Eigen::VectorXd ref_embedding;
  Eigen::VectorXd gen_embedding;
  std::string error;
};

template <typename F>
void Optional(std::optional<double>& slot, std::vector<std::string>& notes, const char* name, F f) {
  try {
    slot = f();
  } catch (const Error& e) {
    notes.push_back(std::string(name) + ": " + e.what());
  }
}

ClipResult EvaluateClip(const fs::path& ref_path, const fs::path& gen_path, const std::string& name) {
  ClipResult r;
  r.metrics.name = name;
  try {
    const foa::FoaClip ref = foa::ReadFoaWav(ref_path);
    const foa::FoaClip gen = foa::ReadFoaWav(gen_path);
    auto& m = r.metrics;
    m.snr = Snr(ref, gen);
    m.stft_error = StftError(ref, gen);
    Optional(m.doa_error, m.notes, "doa_error", [&] { return DoaError(ref, gen); });
    Optional(m.edt_diff, m.notes, "edt_diff", [&] { return EdtDiff(ref, gen); });
    Optional(m.si_sdr, m.notes, "si_sdr", [&] { return SiSdr(ref, gen); });
    r.ref_energy = BandLogEnergy(ref);
    r.gen_energy = BandLogEnergy(gen);
    r.ref_embedding = Embed(RawFeatures(ref, r.ref_energy));
    r.gen_embedding = Embed(RawFeatures(gen, r.gen_energy));
  } catch (const Error& e) {
    r.error = name + ": " + e.what();
  }
  return r;
}

double MeanOf(const std::vector<ClipMetrics>& clips, std::optional<double> ClipMetrics::*field) {
  double sum = 0.0;
  size_t n = 0;
  for (const auto& c : clips) {
    if ((c.*field).has_value()) {
      sum += *(c.*field);
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / n;
}

json OptionalJson(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::vector<std::string> ListClips(const fs::path& root) {
  std::vector<std::string> out;
  if (!fs::is_directory(root)) return out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      out.push_back(fs::relative(entry.path(), root).generic_string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

MetricsReport EvaluateCorpusImpl(const fs::path& ref_dir, const fs::path& gen_dir, bool parallel) {
  MetricsReport report;
  if (!fs::is_directory(ref_dir)) report.errors.push_back("reference directory not found: " + ref_dir.string());
  if (!fs::is_directory(gen_dir)) report.errors.push_back("generated directory not found: " + gen_dir.string());
  const auto refs = ListClips(ref_dir);
  const auto gens = ListClips(gen_dir);
  const std::set<std::string> gen_set(gens.begin(), gens.end());
  const std::set<std::string> ref_set(refs.begin(), refs.end());
  std::vector<std::string> matched;
  for (const auto& r : refs) (gen_set.count(r) ? matched : report.unmatched).push_back(r);
  for (const auto& g : gens) {
    if (!ref_set.count(g)) report.unmatched.push_back(g);
  }
  if (matched.empty()) {
    report.errors.push_back("no matching clips between the two directories");
    return report;
  }

  std::vector<ClipResult> results(matched.size());
  const long n = static_cast<long>(matched.size());
#pragma omp parallel for schedule(dynamic) num_threads(parallel::Threads()) if (parallel)
  for (long i = 0; i < n; ++i) {
    results[i] = EvaluateClip(ref_dir / matched[i], gen_dir / matched[i], matched[i]);
  }

  std::vector<std::array<double, kBandEnergyDims>> ref_energy, gen_energy;
  std::vector<Eigen::VectorXd> ref_emb, gen_emb;
  for (auto& r : results) {
    if (!r.error.empty()) {
      report.errors.push_back(r.error);
      continue;
    }
    ref_energy.push_back(r.ref_energy);
    gen_energy.push_back(r.gen_energy);
    ref_emb.push_back(r.ref_embedding);
    gen_emb.push_back(r.gen_embedding);
    report.clips.push_back(std::move(r.metrics));
  }
  if (report.clips.empty()) return report;

  Aggregate agg;
  agg.clips = report.clips.size();
  for (const auto& c : report.clips) {
    agg.snr += c.snr;
    agg.stft_error += c.stft_error;
  }
  agg.snr /= agg.clips;
  agg.stft_error /= agg.clips;
  agg.doa_error = MeanOf(report.clips, &ClipMetrics::doa_error);
  agg.edt_diff = MeanOf(report.clips, &ClipMetrics::edt_diff);
  agg.si_sdr = MeanOf(report.clips, &ClipMetrics::si_sdr);
  agg.kl = KlDivergence(ref_energy, gen_energy);
  try {
    agg.fd = CorpusFrechetDistance(ref_emb, gen_emb);
  } catch (const Error& e) {
    report.errors.push_back(std::string("fd: ") + e.what());
  }
  report.aggregate = agg;
  return report;
}

}  // namespace

MetricsReport EvaluateCorpus(const fs::path& ref_dir, const fs::path& gen_dir) {
  return EvaluateCorpusImpl(ref_dir, gen_dir, true);
}

MetricsReport EvaluateCorpusSerial(const fs::path& ref_dir, const fs::path& gen_dir) {
  return EvaluateCorpusImpl(ref_dir, gen_dir, false);
}

json ReportToJson(const MetricsReport& r) {
  json clips = json::array();
  for (const auto& c : r.clips) {
    clips.push_back({{"name", c.name},
                     {"doa_error", OptionalJson(c.doa_error)},
                     {"snr", c.snr},
                     {"edt_diff", OptionalJson(c.edt_diff)},
                     {"stft_error", c.stft_error},
                     {"si_sdr", OptionalJson(c.si_sdr)},
                     {"notes", c.notes}});
  }
  json out = {{"clips", clips}, {"unmatched", r.unmatched}, {"errors", r.errors}};
  if (r.aggregate) {
    const auto& a = *r.aggregate;
    out["aggregate"] = {{"doa_error", a.doa_error}, {"snr", a.snr},   {"edt_diff", a.edt_diff},
                        {"fd", a.fd},               {"stft_error", a.stft_error},
                        {"si_sdr", a.si_sdr},       {"kl", a.kl},     {"clips", a.clips}};
  } else {
    out["aggregate"] = nullptr;
  }
  return out;
}

std::string ReportToMarkdown(const MetricsReport& r) {
  std::ostringstream os;
  os << "| DOA (rad) | SNR (dB) | EDT (s) | FD | STFT | SI-SDR (dB) | KL |\n";
  os << "|----------:|---------:|--------:|---:|-----:|------------:|---:|\n";
  if (r.aggregate) {
    const auto& a = *r.aggregate;
    os << fmt::format("| {:.4f} | {:.2f} | {:.4f} | {:.4f} | {:.4f} | {:.2f} | {:.4f} |\n", a.doa_error,
                      a.snr, a.edt_diff, a.fd, a.stft_error, a.si_sdr, a.kl);
  }
  return os.str();
}

}  // namespace scenefoa::metrics
