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

#ifndef QDIFFUSE_HARNESS_EXPERIMENT_H_
#define QDIFFUSE_HARNESS_EXPERIMENT_H_

#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.h"
#include "qdiffuse/tasks.h"

namespace qdiffuse::harness {

// Sub-streams of the master seed, one per purpose.
struct RunStreams {
  explicit RunStreams(std::uint64_t seed);

  RandomStream run;
  RandomStream train_data;
  RandomStream test_data;
  RandomStream generate;

  std::map<std::string, std::uint64_t> keys() const;
};

Dataset training_data(const ExperimentConfig& config);
Dataset test_data(const ExperimentConfig& config);

struct TrainRun {
  TrainResult result;
  // mmd_to_data[s][i]: MMD between the output of the s-th trained step at
  // iteration i and the training data {rho_0}.
  std::vector<std::vector<double>> mmd_to_data;
  ForwardTrajectory trajectory;
};

using ProgressFn = std::function<void(int t, double seconds, double final_loss)>;

TrainRun run_training(const ExperimentConfig& config, const ProgressFn& progress = {});

// Backward ensembles from n_test copies of I/d; element k is {rho~_{T-k}}.
// Generation samples one outcome per member unless `mode` says otherwise.
std::vector<WeightedEnsemble> generate_test_trace(
    const BackwardPipeline& pipeline, const ExperimentConfig& config,
    MeasurementMode mode = MeasurementMode::kStochastic);

struct MetricReport {
  TaskKind task = TaskKind::kClustered;
  std::size_t n_generated = 0;
  std::size_t n_data = 0;
  MeanWithError fidelity_gen;  // single-qubit tasks only
  MeanWithError fidelity_data;
  MeanWithError mx_gen;
  MeanWithError mx_data;
  double purity_gen = 0.0;
  double purity_data = 0.0;
  double wasserstein = 0.0;
  double mmd = 0.0;
  Histogram histogram_gen;
  Histogram histogram_data;
};

MetricReport evaluate(TaskKind task, const WeightedEnsemble& generated,
                      const WeightedEnsemble& data, int histogram_bins);
nlohmann::json to_json(const MetricReport& report);

// Wasserstein distance between two independent n_test-sample data draws,
// averaged over `pairs` draw pairs.
MeanWithError wasserstein_data_baseline(const ExperimentConfig& config, int pairs = 10);

// Per-t curves for t = T..0: backward and forward mean purity, and the
// Wasserstein distance of each ensemble to the test data {rho_0}.
struct BackwardCurves {
  std::vector<int> t;
  std::vector<double> purity_backward;
  std::vector<double> purity_forward;
  std::vector<double> wass_backward;
  std::vector<double> wass_forward;
};

BackwardCurves backward_curves(const std::vector<WeightedEnsemble>& trace,
                               const ExperimentConfig& config);

// Closed-form mean purity of the task's data ensemble.
double data_mean_purity(const TaskSpec& task);

}  // namespace qdiffuse::harness

#endif  // QDIFFUSE_HARNESS_EXPERIMENT_H_
