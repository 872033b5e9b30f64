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

#ifndef SCENEFOA_METRICS_CORPUS_H_
#define SCENEFOA_METRICS_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace scenefoa::metrics {

struct ClipMetrics {
  std::string name;  // path relative to the corpus root
  std::optional<double> doa_error;
  double snr = 0.0;
  std::optional<double> edt_diff;
  double stft_error = 0.0;
  std::optional<double> si_sdr;
  std::vector<std::string> notes;  // why an optional metric is missing
};

struct Aggregate {
  double doa_error = 0.0;
  double snr = 0.0;
  double edt_diff = 0.0;
  double stft_error = 0.0;
  double si_sdr = 0.0;
  double kl = 0.0;
  double fd = 0.0;
  size_t clips = 0;
};

struct MetricsReport {
  std::vector<ClipMetrics> clips;
  std::vector<std::string> unmatched;
  std::vector<std::string> errors;
  std::optional<Aggregate> aggregate;
};

// Relative paths of every .wav below root, sorted.
std::vector<std::string> ListClips(const std::filesystem::path& root);

// Pairs clips by relative path; unmatched ones are listed and excluded.
MetricsReport EvaluateCorpus(const std::filesystem::path& ref_dir,
                             const std::filesystem::path& gen_dir);
// Single-threaded reference of EvaluateCorpus.
MetricsReport EvaluateCorpusSerial(const std::filesystem::path& ref_dir,
                                   const std::filesystem::path& gen_dir);

nlohmann::json ReportToJson(const MetricsReport& r);
// Aggregate row in the DOA, SNR, EDT, FD, STFT, SI-SDR, KL column order.
std::string ReportToMarkdown(const MetricsReport& r);

}  // namespace scenefoa::metrics

#endif  // SCENEFOA_METRICS_CORPUS_H_
