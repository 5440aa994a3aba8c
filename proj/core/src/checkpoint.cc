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

#include "qdiffuse/checkpoint.h"

#include <fstream>

#include "qdiffuse/errors.h"

namespace qdiffuse {

std::string ancilla_name(AncillaKind kind) {
  return kind == AncillaKind::kAllZero ? "zero" : "haar";
}

AncillaKind parse_ancilla(const std::string& name) {
  if (name == "zero") return AncillaKind::kAllZero;
  if (name == "haar") return AncillaKind::kHaarFirst;
  throw InvalidArgument("unknown ancilla kind '" + name + "'");
}

nlohmann::json to_json(const Checkpoint& c) {
  const auto& p = c.pipeline;
  nlohmann::json steps = nlohmann::json::array();
  for (int t = p.steps(); t >= 1; --t) {
    const auto params = p.step(t).params();
    steps.push_back({{"t", t}, {"params", std::vector<double>(params.begin(), params.end())}});
  }
  return {
      {"schema_version", kCheckpointSchemaVersion},
      {"config", c.config},
      {"config_hash", c.config_hash},
      {"seed", c.seed},
      {"stream_keys", c.stream_keys},
      {"pipeline",
       {{"n_data", p.num_data_qubits()},
        {"n_anc", p.num_ancillas()},
        {"layers", p.num_layers()},
        {"T", p.steps()},
        {"ancilla", ancilla_name(p.ancilla_kind())},
        {"trained_down_to", p.trained_down_to()},
        {"steps", steps}}},
  };
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kCheckpointSchemaVersion) {
      throw InvalidArgument("checkpoint: schema version " + std::to_string(version) +
                            ", expected " + std::to_string(kCheckpointSchemaVersion));
    }
    Checkpoint c;
    c.config = j.at("config");
    c.config_hash = j.at("config_hash").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.stream_keys = j.at("stream_keys").get<std::map<std::string, std::uint64_t>>();
    const auto& pj = j.at("pipeline");
    const int steps = pj.at("T").get<int>();
    c.pipeline = BackwardPipeline(pj.at("n_data").get<int>(), pj.at("n_anc").get<int>(),
                                  pj.at("layers").get<int>(), steps,
                                  parse_ancilla(pj.at("ancilla").get<std::string>()));
    const auto& sj = pj.at("steps");
    if (!sj.is_array() || static_cast<int>(sj.size()) != steps) {
      throw InvalidArgument("checkpoint: expected " + std::to_string(steps) + " steps");
    }
    for (const auto& s : sj) {
      const int t = s.at("t").get<int>();
      CircuitStep step = c.pipeline.step(t);
      step.set_params(s.at("params").get<std::vector<double>>());
      c.pipeline.set_step(t, std::move(step));
    }
    const int trained = pj.at("trained_down_to").get<int>();
    if (trained < 1 || trained > steps + 1) {
      throw InvalidArgument("checkpoint: trained_down_to out of range");
    }
    for (int t = steps; t >= trained; --t) c.pipeline.mark_trained(t);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(checkpoint).dump(2) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read checkpoint " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("checkpoint " + path.string() + ": " + e.what());
  }
  return checkpoint_from_json(j);
}

nlohmann::json to_json(const TrainRecord& record) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : record.steps) {
    steps.push_back({{"t", s.step},
                     {"loss", s.loss},
                     {"learning_rate", s.learning_rate},
                     {"final_loss", s.final_loss},
                     {"params", s.params}});
  }
  return {{"seed", record.seed}, {"steps", steps}};
}

}  // namespace qdiffuse
