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

#include "config.h"

#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include <openssl/evp.h>

#include "qdiffuse/checkpoint.h"
#include "qdiffuse/state.h"

namespace qdiffuse::harness {
namespace {

using nlohmann::json;

int as_int(const json& v, const std::string& key, int lo, int hi) {
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo || x > hi) {
    throw ConfigError("'" + key + "' = " + std::to_string(x) + " outside [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(x);
}

double as_double(const json& v, const std::string& key, double lo, double hi) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!(x >= lo && x <= hi)) {
    std::ostringstream msg;
    msg << "'" << key << "' = " << x << " outside [" << lo << ", " << hi << "]";
    throw ConfigError(msg.str());
  }
  return x;
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

template <typename Parse>
auto parse_name(const json& v, const std::string& key, Parse parse) {
  const std::string s = as_string(v, key);
  try {
    return parse(s);
  } catch (const InvalidArgument& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

LossKind parse_loss(const std::string& s) {
  if (s == "wasserstein") return LossKind::kWasserstein;
  if (s == "mmd") return LossKind::kMmd;
  throw InvalidArgument("unknown cost function '" + s + "'");
}

InitKind parse_init(const std::string& s) {
  if (s == "normal") return InitKind::kNormal;
  if (s == "xavier") return InitKind::kXavier;
  throw InvalidArgument("unknown init '" + s + "'");
}

MeanEstimator parse_estimator(const std::string& s) {
  if (s == "biased") return MeanEstimator::kBiased;
  if (s == "unbiased") return MeanEstimator::kUnbiased;
  throw InvalidArgument("unknown mean estimator '" + s + "'");
}

}  // namespace

std::string schedule_name(ScheduleKind kind, int exponent) {
  if (kind == ScheduleKind::kLinear) return "linear";
  if (exponent == 1) return "cosine";
  if (exponent == 2) return "cosine_square";
  return "cosine_exponent";
}

std::string loss_name(LossKind kind) {
  return kind == LossKind::kMmd ? "mmd" : "wasserstein";
}

std::string init_name(InitKind kind) {
  return kind == InitKind::kNormal ? "normal" : "xavier";
}

std::string engine_name(GradientKind kind) {
  switch (kind) {
    case GradientKind::kCentralFd: return "fd";
    case GradientKind::kParamShift: return "paramshift";
    case GradientKind::kAdjoint: return "adjoint";
  }
  return "adjoint";
}

GradientKind parse_engine(const std::string& s) {
  if (s == "fd") return GradientKind::kCentralFd;
  if (s == "paramshift") return GradientKind::kParamShift;
  if (s == "adjoint") return GradientKind::kAdjoint;
  throw InvalidArgument("unknown gradient engine '" + s + "'");
}

std::string mode_name(MeasurementMode mode) {
  return mode == MeasurementMode::kEnumerate ? "enumerate" : "stochastic";
}

MeasurementMode parse_mode(const std::string& s) {
  if (s == "enumerate") return MeasurementMode::kEnumerate;
  if (s == "stochastic") return MeasurementMode::kStochastic;
  throw InvalidArgument("unknown measurement mode '" + s + "'");
}

NoiseSchedule ExperimentConfig::noise_schedule() const {
  if (schedule == ScheduleKind::kLinear) return linear_schedule(steps);
  return cosine_exponent_schedule(steps, schedule_exponent, schedule_offset);
}

TrainOptions ExperimentConfig::train_options() const {
  TrainOptions o;
  o.n_anc = n_anc;
  o.layers = layers;
  o.ancilla = ancilla;
  o.init = init;
  o.loss = loss;
  o.engine = engine;
  o.mode = mode;
  o.adam = adam;
  o.iterations = iterations;
  o.estimator = estimator;
  return o;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  if (!j.contains("task")) throw ConfigError("missing required key 'task'");
  ExperimentConfig c;
  c.task = default_task(parse_name(j.at("task"), "task", parse_task));

  std::string schedule = "cosine";
  int exponent = 0;  // 0: not given
  bool per_sample_q = false;

  const std::map<std::string, std::function<void(const json&)>> setters = {
      {"task", [](const json&) {}},
      {"description", [](const json& v) { as_string(v, "description"); }},
      {"n", [&](const json& v) { c.task.n_qubits = as_int(v, "n", 1, 12); }},
      {"n_a", [&](const json& v) { c.n_anc = as_int(v, "n_a", 0, 8); }},
      {"n_train", [&](const json& v) { c.n_train = as_int(v, "n_train", 1, 100000); }},
      {"n_test", [&](const json& v) { c.n_test = as_int(v, "n_test", 1, 1000000); }},
      {"T", [&](const json& v) { c.steps = as_int(v, "T", 1, 1000); }},
      {"L", [&](const json& v) { c.layers = as_int(v, "L", 0, 1000); }},
      {"cost_function",
       [&](const json& v) { c.loss = parse_name(v, "cost_function", parse_loss); }},
      {"forward_schedule", [&](const json& v) { schedule = as_string(v, "forward_schedule"); }},
      {"schedule_exponent",
       [&](const json& v) { exponent = as_int(v, "schedule_exponent", 1, 16); }},
      {"schedule_offset",
       [&](const json& v) { c.schedule_offset = as_double(v, "schedule_offset", 0.0, 10.0); }},
      {"ancilla_type",
       [&](const json& v) { c.ancilla = parse_name(v, "ancilla_type", parse_ancilla); }},
      {"init", [&](const json& v) { c.init = parse_name(v, "init", parse_init); }},
      {"iterations", [&](const json& v) { c.iterations = as_int(v, "iterations", 0, 10000000); }},
      {"learning_rate",
       [&](const json& v) { c.adam.learning_rate = as_double(v, "learning_rate", 0.0, 10.0); }},
      {"lr_decay", [&](const json& v) { c.adam.decay = as_double(v, "lr_decay", 0.0, 1.0); }},
      {"adam_beta1", [&](const json& v) { c.adam.beta1 = as_double(v, "adam_beta1", 0.0, 0.999999); }},
      {"adam_beta2", [&](const json& v) { c.adam.beta2 = as_double(v, "adam_beta2", 0.0, 0.999999999); }},
      {"adam_epsilon",
       [&](const json& v) { c.adam.epsilon = as_double(v, "adam_epsilon", 1e-300, 1.0); }},
      {"engine", [&](const json& v) { c.engine.kind = parse_name(v, "engine", parse_engine); }},
      {"fd_step", [&](const json& v) { c.engine.fd_step = as_double(v, "fd_step", 1e-12, 1.0); }},
      {"measurement_mode",
       [&](const json& v) { c.mode = parse_name(v, "measurement_mode", parse_mode); }},
      {"mean_estimator",
       [&](const json& v) { c.estimator = parse_name(v, "mean_estimator", parse_estimator); }},
      {"seed",
       [&](const json& v) {
         if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
           throw ConfigError("'seed' must be a non-negative integer");
         }
         c.seed = v.get<std::uint64_t>();
       }},
      {"boundary",
       [&](const json& v) { c.task.boundary = parse_name(v, "boundary", parse_boundary); }},
      {"per_sample_q",
       [&](const json& v) {
         if (!v.is_boolean()) throw ConfigError("'per_sample_q' must be a boolean");
         per_sample_q = v.get<bool>();
       }},
      {"histogram_bins",
       [&](const json& v) { c.histogram_bins = as_int(v, "histogram_bins", 1, 100000); }},
      {"epsilon0", [&](const json& v) { c.task.epsilon0 = as_double(v, "epsilon0", 0.0, 100.0); }},
      {"q0_max", [&](const json& v) { c.task.q0_max = as_double(v, "q0_max", 0.0, 1.0); }},
      {"g_min", [&](const json& v) { c.task.g_min = as_double(v, "g_min", 1.0, 1e6); }},
      {"g_max", [&](const json& v) { c.task.g_max = as_double(v, "g_max", 1.0, 1e6); }},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown configuration key '" + key + "'");
    it->second(value);
  }

  if (schedule == "linear") {
    c.schedule = ScheduleKind::kLinear;
    if (exponent != 0) throw ConfigError("'schedule_exponent' given for the linear schedule");
    c.schedule_exponent = 0;
  } else {
    c.schedule = ScheduleKind::kCosineExponent;
    int implied = 0;
    if (schedule == "cosine") {
      implied = 1;
    } else if (schedule == "cosine_square") {
      implied = 2;
    } else if (schedule != "cosine_exponent") {
      throw ConfigError("unknown forward_schedule '" + schedule + "'");
    }
    if (implied != 0 && exponent != 0 && exponent != implied) {
      throw ConfigError("'schedule_exponent' contradicts forward_schedule '" + schedule + "'");
    }
    if (implied == 0 && exponent == 0) {
      throw ConfigError("forward_schedule 'cosine_exponent' needs 'schedule_exponent'");
    }
    c.schedule_exponent = implied != 0 ? implied : exponent;
  }

  if (per_sample_q) {
    throw ConfigError("'per_sample_q' = true is not supported; the schedule is shared by all samples");
  }
  if (c.task.kind != TaskKind::kManyBody && c.task.n_qubits != 1) {
    throw ConfigError("task '" + task_name(c.task.kind) + "' requires n = 1");
  }
  if (c.task.kind == TaskKind::kManyBody && c.task.n_qubits < 2) {
    throw ConfigError("task 'manybody' requires n >= 2");
  }
  if (!(c.task.g_min < c.task.g_max)) throw ConfigError("'g_min' must be below 'g_max'");
  if (c.ancilla == AncillaKind::kHaarFirst && c.n_anc < 1) {
    throw ConfigError("ancilla_type 'haar' needs n_a >= 1");
  }
  if (c.engine.kind == GradientKind::kParamShift && c.mode == MeasurementMode::kStochastic) {
    throw ConfigError("engine 'paramshift' requires measurement_mode 'enumerate'");
  }
  if (c.estimator == MeanEstimator::kUnbiased && c.loss != LossKind::kMmd) {
    throw ConfigError("'mean_estimator' applies to the mmd cost function only");
  }
  return c;
}

void require_register(const ExperimentConfig& c) {
  if (c.task.n_qubits + c.n_anc > kMaxQubits) {
    throw ConfigError("n + n_a = " + std::to_string(c.task.n_qubits + c.n_anc) +
                      " exceeds the " + std::to_string(kMaxQubits) + "-qubit register limit");
  }
}

json to_json(const ExperimentConfig& c) {
  json j = {
      {"task", task_name(c.task.kind)},
      {"n", c.task.n_qubits},
      {"n_a", c.n_anc},
      {"n_train", c.n_train},
      {"n_test", c.test_samples()},
      {"T", c.steps},
      {"L", c.layers},
      {"cost_function", loss_name(c.loss)},
      {"forward_schedule", schedule_name(c.schedule, c.schedule_exponent)},
      {"ancilla_type", ancilla_name(c.ancilla)},
      {"init", init_name(c.init)},
      {"iterations", c.iterations},
      {"learning_rate", c.adam.learning_rate},
      {"lr_decay", c.adam.decay},
      {"adam_beta1", c.adam.beta1},
      {"adam_beta2", c.adam.beta2},
      {"adam_epsilon", c.adam.epsilon},
      {"engine", engine_name(c.engine.kind)},
      {"fd_step", c.engine.fd_step},
      {"measurement_mode", mode_name(c.mode)},
      {"mean_estimator", c.estimator == MeanEstimator::kBiased ? "biased" : "unbiased"},
      {"seed", c.seed},
      {"boundary", boundary_name(c.task.boundary)},
      {"per_sample_q", false},
      {"histogram_bins", c.histogram_bins},
      {"q0_max", c.task.q0_max},
  };
  if (c.schedule == ScheduleKind::kCosineExponent) {
    j["schedule_exponent"] = c.schedule_exponent;
    j["schedule_offset"] = c.schedule_offset;
  }
  if (c.task.kind == TaskKind::kClustered) j["epsilon0"] = c.task.epsilon0;
  if (c.task.kind == TaskKind::kManyBody) {
    j["g_min"] = c.task.g_min;
    j["g_max"] = c.task.g_max;
  }
  return j;
}

LoadedConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read configuration " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  LoadedConfig out;
  out.path = path;
  out.bytes = buf.str();
  json j;
  try {
    j = json::parse(out.bytes);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  out.config = parse_config(j);
  out.hash = git_blob_sha1(out.bytes);
  return out;
}

std::string git_blob_sha1(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &length) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("SHA-1 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

}  // namespace qdiffuse::harness
