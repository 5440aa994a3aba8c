// Copyright 2026 The qdiffuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDIFFUSE_HARNESS_COMMANDS_H_
#define QDIFFUSE_HARNESS_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.h"

namespace qdiffuse::harness {

// Command-line settings that take precedence over the configuration file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<MeasurementMode> mode;
  std::optional<GradientKind> engine;
  std::optional<int> n_test;
};

void apply_overrides(ExperimentConfig& config, const Overrides& overrides);

void cmd_schedule_dump(const LoadedConfig& config, const Overrides& overrides,
                       const std::filesystem::path& out, std::ostream& log);
void cmd_forward(const LoadedConfig& config, const Overrides& overrides,
                 const std::filesystem::path& out, std::ostream& log);
void cmd_train(const LoadedConfig& config, const Overrides& overrides,
               const std::filesystem::path& out, std::ostream& log);

// `config`, when given, must hash to the value recorded in the checkpoint.
// Generation samples one outcome per member unless overrides.mode is set.
void cmd_generate(const std::filesystem::path& checkpoint,
                  const std::optional<LoadedConfig>& config, const Overrides& overrides,
                  const std::filesystem::path& out, std::ostream& log);
void cmd_eval(const std::filesystem::path& generated, const std::filesystem::path& data,
              TaskKind task, int histogram_bins, const std::filesystem::path& out,
              std::ostream& log);
void cmd_benchmark_fig5(const std::vector<LoadedConfig>& configs, const Overrides& overrides,
                        const std::filesystem::path& out, std::ostream& log);

}  // namespace qdiffuse::harness

#endif  // QDIFFUSE_HARNESS_COMMANDS_H_
