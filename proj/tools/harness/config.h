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

#ifndef QDIFFUSE_HARNESS_CONFIG_H_
#define QDIFFUSE_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "qdiffuse/backward.h"
#include "qdiffuse/errors.h"
#include "qdiffuse/forward.h"
#include "qdiffuse/losses.h"
#include "qdiffuse/tasks.h"
#include "qdiffuse/trainer.h"

namespace qdiffuse::harness {

// Raised for malformed or inconsistent configuration; maps to exit code 2.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// One experiment. Keys mirror the hyperparameter table columns; every key
// other than `task` has a default.
struct ExperimentConfig {
  TaskSpec task;
  int n_anc = 2;
  int n_train = 100;
  int n_test = 0;  // 0 means n_train
  int steps = 6;
  int layers = 4;
  LossKind loss = LossKind::kWasserstein;
  ScheduleKind schedule = ScheduleKind::kCosineExponent;
  int schedule_exponent = 1;
  double schedule_offset = kDefaultScheduleOffset;
  AncillaKind ancilla = AncillaKind::kAllZero;
  InitKind init = InitKind::kNormal;
  int iterations = 200;
  AdamOptions adam;
  GradientEngine engine;
  MeasurementMode mode = MeasurementMode::kEnumerate;
  MeanEstimator estimator = MeanEstimator::kBiased;
  std::uint64_t seed = 0;
  int histogram_bins = 60;

  int test_samples() const { return n_test > 0 ? n_test : n_train; }
  NoiseSchedule noise_schedule() const;
  TrainOptions train_options() const;
};

// Strict parse: unknown keys, wrong types and out-of-range values throw
// ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);

// Throws ConfigError unless n + n_a fits the simulator's register limit.
// Closed-form commands skip this check.
void require_register(const ExperimentConfig& config);

struct LoadedConfig {
  std::filesystem::path path;
  ExperimentConfig config;
  std::string bytes;  // file contents as read
  std::string hash;   // git blob SHA-1 of `bytes`
};

LoadedConfig load_config(const std::filesystem::path& path);

// Hex SHA-1 of "blob <size>\0" followed by the content, as git computes it.
std::string git_blob_sha1(const std::string& content);

std::string schedule_name(ScheduleKind kind, int exponent);
std::string loss_name(LossKind kind);
std::string init_name(InitKind kind);
std::string engine_name(GradientKind kind);
std::string mode_name(MeasurementMode mode);
MeasurementMode parse_mode(const std::string& name);
GradientKind parse_engine(const std::string& name);

}  // namespace qdiffuse::harness

#endif  // QDIFFUSE_HARNESS_CONFIG_H_
