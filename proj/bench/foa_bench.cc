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

#include <benchmark/benchmark.h>

#include <filesystem>

#include "scenefoa/acoustics/descriptors.h"
#include "scenefoa/acoustics/render.h"
#include "scenefoa/dataset/dataset.h"
#include "scenefoa/diffusion/train.h"
#include "scenefoa/foa/wav_io.h"
#include "scenefoa/metrics/corpus.h"

namespace scenefoa {
namespace {

namespace fs = std::filesystem;

const scene::SceneManifest& Scene() {
  static const auto m = dataset::SynthesizeScene(dataset::Preset::kMultiSource, 11, 2.0);
  return m;
}

void BM_Render(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto clip = parallel ? acoustics::RenderReference(Scene()) : acoustics::RenderReferenceSerial(Scene());
    benchmark::DoNotOptimize(clip);
  }
}
BENCHMARK(BM_Render)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Descriptors(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto d = parallel ? acoustics::ComputeDescriptors(Scene()) : acoustics::ComputeDescriptorsSerial(Scene());
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_Descriptors)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BatchGradient(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  static const std::vector<diffusion::TrainExample> examples = [] {
    const auto m = dataset::SynthesizeScene(dataset::Preset::kGeometry, 3, 0.5);
    const std::vector<diffusion::TrainingPair> data = {{acoustics::ComputeDescriptors(m), acoustics::RenderReference(m)}};
    foa::ChannelStats stats;
    return diffusion::PrepareExamples(data, diffusion::ConditioningMode::kFull, &stats);
  }();
  diffusion::DenoiserConfig dc;
  const diffusion::Denoiser model(dc, diffusion::NoiseSchedule(), 1);
  const auto batch = diffusion::DrawBatch(examples, diffusion::TrainConfig{}, model.schedule(), 0);
  diffusion::Buffer grad;
  for (auto _ : state) {
    const double loss = parallel ? diffusion::BatchGradient(model, batch, &grad)
                                 : diffusion::BatchGradientSerial(model, batch, &grad);
    benchmark::DoNotOptimize(loss);
  }
}
BENCHMARK(BM_BatchGradient)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EvaluateCorpus(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  static const fs::path root = [] {
    const fs::path dir = fs::temp_directory_path() / "scenefoa_bench_corpus";
    fs::remove_all(dir);
    for (uint64_t i = 0; i < 8; ++i) {
      const auto m = dataset::SynthesizeScene(dataset::Preset::kMultiSource, 100 + i, 1.0);
      const auto clip = acoustics::RenderReference(m);
      for (const char* side : {"ref", "gen"}) {
        fs::create_directories(dir / side);
        foa::WriteFoaWav(dir / side / ("clip" + std::to_string(i) + ".wav"), clip);
      }
    }
    return dir;
  }();
  for (auto _ : state) {
    auto report = parallel ? metrics::EvaluateCorpus(root / "ref", root / "gen")
                           : metrics::EvaluateCorpusSerial(root / "ref", root / "gen");
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_EvaluateCorpus)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace scenefoa

BENCHMARK_MAIN();
