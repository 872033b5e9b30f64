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

#ifndef SCENEFOA_CLI_COMMANDS_H_
#define SCENEFOA_CLI_COMMANDS_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenefoa/core/error.h"
#include "scenefoa/diffusion/train.h"

namespace scenefoa::cli {

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitInvalidInput = 2, kExitMissingArtifact = 3 };

int ExitCodeFor(ErrorCode code);

// Keys of TrainConfig by field name, "mode" as a conditioning mode name.
// Throws kOutOfRange on unknown keys or bad values.
diffusion::TrainConfig TrainConfigFromJson(const nlohmann::json& j);

// Materialized (descriptors, reference) pairs below `corpus`. A directory with
// dataset.json contributes its `split` scenes; otherwise every directory
// holding ref.wav and descriptors.jsonl is used.
std::vector<diffusion::TrainingPair> LoadTrainingPairs(const std::filesystem::path& corpus,
                                                       const std::string& split);

// Parses the command line and runs one subcommand. Errors are written to
// `err` as a single JSON object; the return value is the process exit code.
int Run(const std::vector<std::string>& args, std::ostream& err);

}  // namespace scenefoa::cli

#endif  // SCENEFOA_CLI_COMMANDS_H_
