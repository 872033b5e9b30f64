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

#include "scenefoa/cli/commands.h"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "scenefoa/acoustics/descriptors.h"
#include "scenefoa/acoustics/render.h"
#include "scenefoa/core/parallel.h"
#include "scenefoa/core/random.h"
#include "scenefoa/dataset/dataset.h"
#include "scenefoa/diffusion/checkpoint.h"
#include "scenefoa/diffusion/sampler.h"
#include "scenefoa/foa/wav_io.h"
#include "scenefoa/io/wav.h"
#include "scenefoa/metrics/corpus.h"
#include "scenefoa/service/server.h"

namespace scenefoa::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  uint64_t seed = 0;
  int threads = 1;
  std::string log_level = "info";
};

void SetUpLogging(const std::string& level) {
  static const auto logger = [] {
    auto l = std::make_shared<spdlog::logger>("scenefoa", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    spdlog::set_default_logger(l);
    return l;
  }();
  logger->set_level(spdlog::level::from_str(level));
}

void RequireFile(const fs::path& path, const char* what) {
  if (!fs::exists(path)) throw Error(ErrorCode::kNotFound, std::string(what) + " " + path.string() + " does not exist");
}

void EnsureParent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

int Render(const Globals& g, const fs::path& scene, const fs::path& out, const std::string& mode,
           const std::string& checkpoint, int steps) {
  if (mode == "diffusion" && checkpoint.empty()) {
    throw Error(ErrorCode::kNotFound, "diffusion mode needs --checkpoint");
  }
  const auto m = scene::LoadManifest(scene);
  foa::FoaClip clip;
  if (mode == "geometric") {
    clip = acoustics::RenderReference(m);
  } else {
    RequireFile(checkpoint, "checkpoint");
    const auto model = diffusion::LoadCheckpoint(checkpoint);
    const auto samples = static_cast<size_t>(std::lround(m.duration * m.sample_rate));
    clip = diffusion::Generate(model, acoustics::ComputeDescriptors(m), samples, steps, g.seed);
  }
  EnsureParent(out);
  foa::WriteFoaWav(out, clip);
  spdlog::info("wrote {} ({} samples)", out.string(), clip.frames());
  return kExitOk;
}

int SynthDataset(const Globals& g, const std::string& preset, int count, const fs::path& out, double duration) {
  const auto d = dataset::Generate(dataset::ParsePreset(preset), count, g.seed, out, duration);
  const auto report = dataset::Materialize(d);
  spdlog::info("materialized {}/{} scenes in {}", report.rendered, d.scenes.size(), d.dir.string());
  if (report.partial()) {
    throw Error(ErrorCode::kIo, "corpus is partial: " + std::to_string(report.failed.size()) + " scene(s) failed");
  }
  return kExitOk;
}

int TrainCmd(const Globals& g, const fs::path& corpus, const std::string& config, const fs::path& out,
             std::string log_path) {
  json cfg_json = json::object();
  if (!config.empty()) {
    RequireFile(config, "config");
    try {
      cfg_json = json::parse(io::ReadFile(config));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kManifestSyntax, config + ": " + e.what());
    }
  }
  auto cfg = TrainConfigFromJson(cfg_json);
  cfg.seed = g.seed;
  const auto pairs = LoadTrainingPairs(corpus, "train");
  spdlog::info("training on {} scene(s), {} steps", pairs.size(), cfg.steps);
  if (log_path.empty()) log_path = out.string() + ".log.jsonl";
  EnsureParent(log_path);
  std::ofstream log(log_path, std::ios::binary);
  if (!log) throw Error(ErrorCode::kIo, "cannot write " + log_path);
  const auto result = diffusion::Train(pairs, cfg, &log);
  EnsureParent(out);
  diffusion::SaveCheckpoint(out, result.model);
  spdlog::info("final loss {:.6f}; checkpoint {}", result.final_loss, out.string());
  return kExitOk;
}

int GenerateCmd(const Globals& g, const fs::path& corpus, const fs::path& checkpoint, const fs::path& out,
                const std::string& split, int steps) {
  RequireFile(checkpoint, "checkpoint");
  RequireFile(corpus / dataset::kDatasetFile, "dataset manifest");
  const auto model = diffusion::LoadCheckpoint(checkpoint);
  const auto d = dataset::LoadDataset(corpus);
  const auto scenes = dataset::MaterializedScenes(d, split);
  if (scenes.empty()) throw Error(ErrorCode::kNotFound, "no materialized scenes in split '" + split + "'");
  for (const auto& s : scenes) {
    const auto desc = acoustics::ReadDescriptors(s.scene_dir / "descriptors.jsonl");
    const auto info = io::ReadWavInfo(s.scene_dir / "ref.wav");
    const auto clip = diffusion::Generate(model, desc, info.frames, steps, DeriveSeed(g.seed, "generate/" + s.id));
    const fs::path dest = out / fs::relative(s.scene_dir, d.dir) / "ref.wav";
    EnsureParent(dest);
    foa::WriteFoaWav(dest, clip);
    spdlog::info("generated {}", dest.string());
  }
  return kExitOk;
}

int EvalCmd(const fs::path& ref, const fs::path& gen, const fs::path& report_path) {
  for (const auto& dir : {ref, gen}) {
    if (!fs::is_directory(dir)) throw Error(ErrorCode::kNotFound, dir.string() + " is not a directory");
  }
  const auto report = metrics::EvaluateCorpus(ref, gen);
  EnsureParent(report_path);
  if (report_path.extension() == ".md") {
    io::WriteFileAtomic(report_path, metrics::ReportToMarkdown(report));
  } else {
    io::WriteFileAtomic(report_path, metrics::ReportToJson(report).dump(2) + "\n");
  }
  if (!report.aggregate) throw Error(ErrorCode::kEmptyInput, "no matched clips between the corpora");
  spdlog::info("evaluated {} clip pair(s); DOA {:.6f} rad", report.aggregate->clips, report.aggregate->doa_error);
  return kExitOk;
}

int ServeCmd(const Globals& g, const std::string& address, int port, const fs::path& corpus,
             const std::string& checkpoint, const std::string& hrir_dir, int steps) {
  service::ClipLibrary::Generator generator;
  if (!checkpoint.empty()) {
    RequireFile(checkpoint, "checkpoint");
    auto model = std::make_shared<const diffusion::Denoiser>(diffusion::LoadCheckpoint(checkpoint));
    generator = [model, steps, seed = g.seed](const service::ClipInfo& info) {
      const auto desc = acoustics::ReadDescriptors(info.dir / "descriptors.jsonl");
      const auto frames = io::ReadWavInfo(info.dir / "ref.wav").frames;
      return diffusion::Generate(*model, desc, frames, steps, DeriveSeed(seed, "serve/" + info.id));
    };
  }
  auto library = std::make_shared<const service::ClipLibrary>(service::ClipLibrary::Scan(corpus, generator));
  auto hrirs = std::make_shared<const foa::HrirSet>(hrir_dir.empty() ? foa::HrirSet::Synthetic()
                                                                      : foa::HrirSet::Load(hrir_dir));
  service::ServerConfig cfg;
  cfg.address = address;
  cfg.port = static_cast<uint16_t>(port);
  cfg.threads = std::max(2, g.threads);
  service::Server server(cfg, library, hrirs);
  server.StopOnSignals();
  try {
    server.Start();
  } catch (const Error& e) {
    throw Error(ErrorCode::kIo, std::string("startup failed: ") + e.what());
  }
  server.Wait();
  return kExitOk;
}

json ErrorJson(const std::string& code, const std::string& message, const std::vector<std::string>& violations = {}) {
  json e = {{"code", code}, {"message", message}};
  if (!violations.empty()) e["violations"] = violations;
  return {{"error", e}};
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kManifestSyntax:
    case ErrorCode::kManifestInvalid:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kInvalidRotation:
    case ErrorCode::kSampleRateMismatch:
    case ErrorCode::kInvalidHrirSet:
    case ErrorCode::kEmptyDepthMap:
    case ErrorCode::kDegenerateRay:
    case ErrorCode::kUnsupportedOrder:
    case ErrorCode::kInvalidGeometry:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kEmptyInput:
    case ErrorCode::kNoActivity:
    case ErrorCode::kUndefinedMetric:
      return kExitInvalidInput;
    case ErrorCode::kNotFound:
    case ErrorCode::kCorruptArtifact:
      return kExitMissingArtifact;
    case ErrorCode::kNumericalDivergence:
    case ErrorCode::kIo:
      return kExitInternal;
  }
  return kExitInternal;
}

diffusion::TrainConfig TrainConfigFromJson(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kOutOfRange, "training config must be a JSON object");
  diffusion::TrainConfig c;
  const std::map<std::string, std::function<void(const json&)>> setters = {
      {"batch_size", [&](const json& v) { c.batch_size = v.get<int>(); }},
      {"steps", [&](const json& v) { c.steps = v.get<int>(); }},
      {"learning_rate", [&](const json& v) { c.learning_rate = v.get<double>(); }},
      {"mode", [&](const json& v) { c.mode = diffusion::ParseMode(v.get<std::string>()); }},
      {"sampler_steps", [&](const json& v) { c.sampler_steps = v.get<int>(); }},
      {"width", [&](const json& v) { c.width = v.get<double>(); }},
      {"crop_frames", [&](const json& v) { c.crop_frames = v.get<int>(); }},
      {"weight_decay", [&](const json& v) { c.weight_decay = v.get<double>(); }},
      {"grad_clip", [&](const json& v) { c.grad_clip = v.get<double>(); }},
      {"final_lr_fraction", [&](const json& v) { c.final_lr_fraction = v.get<double>(); }},
      {"prior_lr_scale", [&](const json& v) { c.prior_lr_scale = v.get<double>(); }},
      {"snr_gamma", [&](const json& v) { c.snr_gamma = v.get<double>(); }},
      {"noise_steps", [&](const json& v) { c.noise_steps = v.get<int>(); }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorCode::kOutOfRange, "unknown training config key '" + key + "'");
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kOutOfRange, "training config '" + key + "': " + e.what());
    }
  }
  c.Validate();
  return c;
}

std::vector<diffusion::TrainingPair> LoadTrainingPairs(const fs::path& corpus, const std::string& split) {
  std::vector<fs::path> dirs;
  if (fs::exists(corpus / dataset::kDatasetFile)) {
    for (const auto& s : dataset::MaterializedScenes(dataset::LoadDataset(corpus), split)) dirs.push_back(s.scene_dir);
  } else if (fs::is_directory(corpus)) {
    for (const auto& e : fs::recursive_directory_iterator(corpus)) {
      if (e.path().filename() == "ref.wav" && fs::exists(e.path().parent_path() / "descriptors.jsonl")) {
        dirs.push_back(e.path().parent_path());
      }
    }
    std::sort(dirs.begin(), dirs.end());
  }
  if (dirs.empty()) throw Error(ErrorCode::kNotFound, "no materialized scenes under " + corpus.string());
  std::vector<diffusion::TrainingPair> pairs;
  for (const auto& dir : dirs) {
    pairs.push_back({acoustics::ReadDescriptors(dir / "descriptors.jsonl"), foa::ReadFoaWav(dir / "ref.wav")});
  }
  return pairs;
}

int Run(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Scene-aware first-order ambisonics rendering, generation and evaluation", "scenefoa"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Root seed for every random stream");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--log-level", g.log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  std::string scene, out, mode = "geometric", checkpoint, preset, corpus, config, log_path, ref, gen, report;
  std::string split = "test", address = "127.0.0.1", hrir_dir;
  int count = 0, steps = 50, port = 8080;
  double duration = dataset::kSceneDuration;

  auto* render = app.add_subcommand("render", "Render a scene manifest to a FOA WAV");
  render->add_option("--scene", scene, "Scene manifest")->required();
  render->add_option("--out", out, "Output WAV")->required();
  render->add_option("--mode", mode, "geometric or diffusion")->check(CLI::IsMember({"geometric", "diffusion"}));
  render->add_option("--checkpoint", checkpoint, "Model checkpoint (diffusion mode)");
  render->add_option("--steps", steps, "Sampler steps")->check(CLI::IsMember({50, 250, 1000}));

  auto* synth = app.add_subcommand("synth-dataset", "Generate and render a synthetic corpus");
  synth->add_option("--preset", preset, "geometry, movesource or multisource")->required();
  synth->add_option("--count", count, "Number of scenes")->required()->check(CLI::PositiveNumber);
  synth->add_option("--out", out, "Corpus root")->required();
  synth->add_option("--duration", duration, "Scene length in seconds")->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "Train the latent denoiser");
  train->add_option("--corpus", corpus, "Materialized corpus directory")->required();
  train->add_option("--config", config, "Training config JSON");
  train->add_option("--out", out, "Checkpoint path")->required();
  train->add_option("--log", log_path, "Training log (JSONL); default <out>.log.jsonl");

  auto* generate = app.add_subcommand("generate", "Sample FOA clips for a corpus split");
  generate->add_option("--corpus", corpus, "Dataset directory")->required();
  generate->add_option("--checkpoint", checkpoint, "Model checkpoint")->required();
  generate->add_option("--out", out, "Output corpus root")->required();
  generate->add_option("--split", split, "train, val, test or all")->check(CLI::IsMember({"train", "val", "test", "all"}));
  generate->add_option("--steps", steps, "Sampler steps")->check(CLI::IsMember({50, 250, 1000}));

  auto* eval = app.add_subcommand("eval", "Compare a generated corpus with a reference corpus");
  eval->add_option("--ref", ref, "Reference corpus")->required();
  eval->add_option("--gen", gen, "Generated corpus")->required();
  eval->add_option("--report", report, "Report path (.json or .md)")->required();

  auto* serve = app.add_subcommand("serve", "Stream head-tracked playback over WebSocket");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--address", address, "Bind address");
  serve->add_option("--corpus", corpus, "Corpus directory")->required();
  serve->add_option("--checkpoint", checkpoint, "Model checkpoint for generated clips");
  serve->add_option("--hrir", hrir_dir, "HRIR directory (default: synthetic spherical head)");
  serve->add_option("--steps", steps, "Sampler steps for generated clips")->check(CLI::IsMember({50, 250, 1000}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    err << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << ErrorJson("Usage", e.what()).dump() << "\n";
    return kExitInvalidInput;
  }

  SetUpLogging(g.log_level);
  try {
    parallel::SetThreads(g.threads);
    if (*render) return Render(g, scene, out, mode, checkpoint, steps);
    if (*synth) return SynthDataset(g, preset, count, out, duration);
    if (*train) return TrainCmd(g, corpus, config, out, log_path);
    if (*generate) return GenerateCmd(g, corpus, checkpoint, out, split == "all" ? "" : split, steps);
    if (*eval) return EvalCmd(ref, gen, report);
    if (*serve) return ServeCmd(g, address, port, corpus, checkpoint, hrir_dir, steps);
  } catch (const ManifestInvalidError& e) {
    err << ErrorJson(std::string(ErrorCodeName(e.code())), e.what(), e.violations()).dump() << "\n";
    return ExitCodeFor(e.code());
  } catch (const Error& e) {
    err << ErrorJson(std::string(ErrorCodeName(e.code())), e.what()).dump() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << ErrorJson("Internal", e.what()).dump() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace scenefoa::cli
