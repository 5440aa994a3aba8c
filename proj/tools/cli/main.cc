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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.h"
#include "config.h"
#include "qdiffuse/errors.h"

namespace {

using namespace qdiffuse;
using namespace qdiffuse::harness;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int report(const std::string& kind, const std::string& message, int code) {
  std::cerr << nlohmann::json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}
                   .dump()
            << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-state quantum diffusion: forward noise, stepwise backward training, "
               "generation and evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> config_paths;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string engine;
  std::optional<int> n_test;

  auto add_common = [&](CLI::App* cmd, bool with_training_flags) {
    cmd->add_option("--out", out, "Output directory (created; must be empty)")->required();
    cmd->add_option("--seed", seed, "Master seed, overriding the configuration");
    if (with_training_flags) {
      cmd->add_option("--mode", mode, "Measurement mode")
          ->check(CLI::IsMember({"enumerate", "stochastic"}));
      cmd->add_option("--engine", engine, "Gradient engine")
          ->check(CLI::IsMember({"fd", "paramshift", "adjoint"}));
    }
  };

  auto* schedule = app.add_subcommand("schedule-dump", "Closed-form purity under each schedule");
  schedule->add_option("--config", config_path, "Experiment configuration (JSON)")->required();
  add_common(schedule, false);

  auto* forward = app.add_subcommand("forward", "Dump the forward trajectory of the test data");
  forward->add_option("--config", config_path, "Experiment configuration (JSON)")->required();
  forward->add_option("--n-test", n_test, "Number of test samples");
  add_common(forward, false);

  auto* train = app.add_subcommand("train", "Train every backward step and evaluate");
  train->add_option("--config", config_path, "Experiment configuration (JSON)")->required();
  add_common(train, true);

  std::string checkpoint;
  auto* generate = app.add_subcommand("generate", "Run a trained model on maximally mixed inputs");
  generate->add_option("--checkpoint", checkpoint, "checkpoint.json from `train`")->required();
  generate->add_option("--config", config_path, "Configuration to verify against the checkpoint");
  generate->add_option("--n-test", n_test, "Number of generated samples");
  add_common(generate, true);

  std::string generated;
  std::string data;
  std::string task = "clustered";
  int bins = 60;
  auto* eval = app.add_subcommand("eval", "Metrics of a generated dump against a data dump");
  eval->add_option("--generated", generated, "Generated ensemble CSV")->required();
  eval->add_option("--data", data, "Data ensemble CSV")->required();
  eval->add_option("--task", task, "Task")->check(CLI::IsMember({"clustered", "circular", "manybody"}));
  eval->add_option("--bins", bins, "Histogram bins")->check(CLI::PositiveNumber);
  eval->add_option("--out", out, "Output directory (created; must be empty)")->required();

  auto* fig5 = app.add_subcommand("benchmark-fig5", "Compare two step/ancilla configurations");
  fig5->add_option("--config", config_paths, "The two configurations")->required()->expected(2);
  add_common(fig5, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), kExitConfig);
  }

  try {
    Overrides o;
    o.seed = seed;
    o.n_test = n_test;
    if (!mode.empty()) o.mode = parse_mode(mode);
    if (!engine.empty()) o.engine = parse_engine(engine);

    if (*schedule) {
      cmd_schedule_dump(load_config(config_path), o, out, std::cerr);
    } else if (*forward) {
      cmd_forward(load_config(config_path), o, out, std::cerr);
    } else if (*train) {
      cmd_train(load_config(config_path), o, out, std::cerr);
    } else if (*generate) {
      std::optional<LoadedConfig> loaded;
      if (!config_path.empty()) loaded = load_config(config_path);
      cmd_generate(checkpoint, loaded, o, out, std::cerr);
    } else if (*eval) {
      cmd_eval(generated, data, parse_task(task), bins, out, std::cerr);
    } else if (*fig5) {
      std::vector<LoadedConfig> loaded;
      for (const auto& p : config_paths) loaded.push_back(load_config(p));
      cmd_benchmark_fig5(loaded, o, out, std::cerr);
    }
  } catch (const NumericalError& e) {
    return report("numerical", e.what(), kExitNumerical);
  } catch (const InvalidArgument& e) {
    return report("config", e.what(), kExitConfig);
  } catch (const std::exception& e) {
    return report("runtime", e.what(), kExitFailure);
  }
  return 0;
}
