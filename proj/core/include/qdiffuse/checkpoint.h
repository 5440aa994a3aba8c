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

#ifndef QDIFFUSE_CHECKPOINT_H_
#define QDIFFUSE_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "qdiffuse/backward.h"
#include "qdiffuse/trainer.h"

namespace qdiffuse {

inline constexpr int kCheckpointSchemaVersion = 1;

struct Checkpoint {
  nlohmann::json config;    // echo of the run configuration
  std::string config_hash;  // content hash of the configuration bytes
  std::uint64_t seed = 0;
  std::map<std::string, std::uint64_t> stream_keys;
  BackwardPipeline pipeline;
};

std::string ancilla_name(AncillaKind kind);
AncillaKind parse_ancilla(const std::string& name);

nlohmann::json to_json(const Checkpoint& checkpoint);
// Throws InvalidArgument on a schema mismatch or malformed content.
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Wall-clock fields are left out so that the result is reproducible.
nlohmann::json to_json(const TrainRecord& record);

}  // namespace qdiffuse

#endif  // QDIFFUSE_CHECKPOINT_H_
