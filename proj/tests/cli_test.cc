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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "scenefoa/foa/ops.h"
#include "scenefoa/foa/wav_io.h"
#include "scenefoa/io/wav.h"
#include "scenefoa/service/server.h"

namespace scenefoa::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kFixtures = fs::path(SCENEFOA_SOURCE_DIR) / "fixtures" / "scenes";

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("scenefoa_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct Result {
  int code = 0;
  std::string err;
};

Result Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "scenefoa");
  std::ostringstream err;
  const int code = Run(args, err);
  return {code, err.str()};
}

std::map<std::string, std::string> TreeContents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = io::ReadFile(e.path());
  }
  return out;
}

TEST(CliTest, RenderGeometricMatchesAnalyticDirection) {
  const fs::path out = TempDir("render") / "out.wav";
  const auto r = Cli({"render", "--scene", (kFixtures / "anechoic_static.json").string(), "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(foa::ValidateFoaWav(out).empty());
  const auto clip = foa::ReadFoaWav(out);
  const auto doa = foa::EstimateDoa(clip, clip.frames());
  ASSERT_EQ(doa.size(), 1u);
  // Source 2 m straight ahead of the listener.
  EXPECT_LT(foa::AngularDistance(doa[0].direction.UnitVector(), foa::Vec3(1, 0, 0)), 1e-3);
}

TEST(CliTest, InvalidManifestExitsTwoWithViolations) {
  const auto r = Cli({"render", "--scene", (kFixtures / "invalid_absorption.json").string(), "--out",
                      (TempDir("invalid") / "x.wav").string()});
  EXPECT_EQ(r.code, 2);
  const auto err = json::parse(r.err);
  EXPECT_EQ(err["error"]["code"], "ManifestInvalid");
  EXPECT_FALSE(err["error"]["violations"].empty());
}

TEST(CliTest, DiffusionWithoutCheckpointExitsThree) {
  const fs::path dir = TempDir("nockpt");
  const std::string scene = (kFixtures / "minimal_shoebox.json").string();
  auto r = Cli({"render", "--scene", scene, "--out", (dir / "x.wav").string(), "--mode", "diffusion"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "NotFound");
  r = Cli({"render", "--scene", scene, "--out", (dir / "x.wav").string(), "--mode", "diffusion", "--checkpoint",
           (dir / "missing.ckpt").string()});
  EXPECT_EQ(r.code, 3);
  io::WriteFileAtomic(dir / "bad.ckpt", "not a checkpoint");
  r = Cli({"render", "--scene", scene, "--out", (dir / "x.wav").string(), "--mode", "diffusion", "--checkpoint",
           (dir / "bad.ckpt").string()});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "CorruptArtifact");
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(Cli({}).code, 2);
  EXPECT_EQ(Cli({"render", "--scene", "a", "--out", "b", "--bogus"}).code, 2);
  EXPECT_EQ(Cli({"--threads", "0", "render", "--scene", "a", "--out", "b"}).code, 2);
  EXPECT_EQ(Cli({"--log-level", "loud", "render", "--scene", "a", "--out", "b"}).code, 2);
  EXPECT_EQ(Cli({"synth-dataset", "--preset", "forest", "--count", "1", "--out", "x"}).code, 2);
  const auto r = Cli({"frobnicate"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.err)["error"]["code"], "Usage");
}

TEST(CliTest, SynthDatasetIsDeterministic) {
  const fs::path a = TempDir("synth_a");
  const fs::path b = TempDir("synth_b");
  for (const auto& dir : {a, b}) {
    const auto r = Cli({"--seed", "17", "synth-dataset", "--preset", "multisource", "--count", "3", "--out",
                        dir.string(), "--duration", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const auto ta = TreeContents(a);
  EXPECT_EQ(ta.size(), 3u * 3u + 2u);
  EXPECT_EQ(ta, TreeContents(b));
}

TEST(CliTest, EvalOfCorpusAgainstItselfIsZero) {
  const fs::path root = TempDir("eval");
  ASSERT_EQ(Cli({"synth-dataset", "--preset", "geometry", "--count", "2", "--out", root.string(), "--duration", "1"}).code,
            0);
  const fs::path report = root / "report.json";
  const auto r = Cli({"eval", "--ref", (root / "geometry").string(), "--gen", (root / "geometry").string(), "--report",
                      report.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto agg = json::parse(io::ReadFile(report))["aggregate"];
  EXPECT_EQ(agg["clips"], 2);
  EXPECT_EQ(agg["doa_error"].get<double>(), 0.0);
  EXPECT_LE(agg["kl"].get<double>(), 1e-12);
  EXPECT_LE(agg["fd"].get<double>(), 1e-8);
  EXPECT_EQ(Cli({"eval", "--ref", (root / "nope").string(), "--gen", root.string(), "--report", report.string()}).code,
            3);
}

TEST(CliTest, TrainSmokeConfigOverfitsOneScene) {
  const fs::path root = TempDir("train");
  ASSERT_EQ(Cli({"--seed", "5", "synth-dataset", "--preset", "geometry", "--count", "1", "--out", root.string(),
                 "--duration", "0.25"})
                .code,
            0);
  const fs::path config = root / "smoke.json";
  io::WriteFileAtomic(config, R"({"steps": 400, "batch_size": 1, "learning_rate": 0.003})");
  const fs::path ckpt = root / "model.ckpt";
  const auto r = Cli({"--seed", "1", "train", "--corpus", (root / "geometry").string(), "--config", config.string(),
                      "--out", ckpt.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(fs::exists(ckpt));
  std::vector<double> losses;
  std::ifstream log(ckpt.string() + ".log.jsonl");
  for (std::string line; std::getline(log, line);) losses.push_back(json::parse(line)["loss"].get<double>());
  ASSERT_EQ(losses.size(), 400u);
  double tail = 0.0;
  for (size_t i = 360; i < 400; ++i) tail += losses[i];
  EXPECT_LT(tail / 40.0, 0.05);

  // Diffusion render and generate are byte-reproducible.
  const std::string scene = (root / "geometry" / "geometry_0000" / "scene.json").string();
  for (const char* name : {"a.wav", "b.wav"}) {
    ASSERT_EQ(Cli({"--seed", "9", "render", "--scene", scene, "--out", (root / name).string(), "--mode", "diffusion",
                   "--checkpoint", ckpt.string()})
                  .code,
              0);
  }
  EXPECT_EQ(io::ReadFile(root / "a.wav"), io::ReadFile(root / "b.wav"));
  EXPECT_EQ(Cli({"train", "--corpus", (root / "empty").string(), "--out", (root / "x.ckpt").string()}).code, 3);
  io::WriteFileAtomic(root / "badcfg.json", R"({"stepz": 3})");
  EXPECT_EQ(Cli({"train", "--corpus", (root / "geometry").string(), "--config", (root / "badcfg.json").string(),
                 "--out", (root / "x.ckpt").string()})
                .code,
            2);
}

TEST(CliTest, ServeOnBusyPortExitsOne) {
  const fs::path root = TempDir("serve");
  ASSERT_EQ(Cli({"synth-dataset", "--preset", "geometry", "--count", "1", "--out", root.string(), "--duration", "0.5"})
                .code,
            0);
  service::Server blocker({}, std::make_shared<service::ClipLibrary>(),
                          std::make_shared<foa::HrirSet>(foa::HrirSet::Synthetic()));
  const uint16_t port = blocker.Start();
  const auto r = Cli({"serve", "--port", std::to_string(port), "--corpus", root.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("startup failed"), std::string::npos);
}

TEST(CliTest, TrainConfigRejectsUnknownKeys) {
  EXPECT_EQ(TrainConfigFromJson(json::object()).steps, 1000);
  EXPECT_EQ(TrainConfigFromJson({{"mode", "none"}}).mode, diffusion::ConditioningMode::kNone);
  EXPECT_THROW(TrainConfigFromJson({{"mode", "everything"}}), Error);
  EXPECT_THROW(TrainConfigFromJson({{"steps", "many"}}), Error);
  EXPECT_THROW(TrainConfigFromJson({{"batch_size", 0}}), Error);
}

}  // namespace
}  // namespace scenefoa::cli
