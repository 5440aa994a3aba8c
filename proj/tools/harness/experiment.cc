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

#include "experiment.h"

#include <chrono>

#include "qdiffuse/losses.h"

namespace qdiffuse::harness {

RunStreams::RunStreams(std::uint64_t seed)
    : run(seed),
      train_data(run.split(StreamTag::kTrainData)),
      test_data(run.split(StreamTag::kTestData)),
      generate(run.split(StreamTag::kGenerate)) {}

std::map<std::string, std::uint64_t> RunStreams::keys() const {
  return {{"run", run.key()},
          {"train_data", train_data.key()},
          {"test_data", test_data.key()},
          {"generate", generate.key()},
          {"train", training_stream(run).key()}};
}

Dataset training_data(const ExperimentConfig& c) {
  return generate_dataset(c.task, c.n_train, RunStreams(c.seed).train_data);
}

Dataset test_data(const ExperimentConfig& c) {
  return generate_dataset(c.task, c.test_samples(), RunStreams(c.seed).test_data);
}

TrainRun run_training(const ExperimentConfig& c, const ProgressFn& progress) {
  require_register(c);
  const RunStreams streams(c.seed);
  TrainRun out;
  const Dataset data = training_data(c);
  out.trajectory = forward_trajectory(data.states, c.noise_schedule());

  const auto data_features = superfidelity_features(WeightedEnsemble::uniform(data.states));
  std::vector<double>* current = nullptr;
  TrainOptions options = c.train_options();
  options.observer = [&](int, int, const WeightedEnsemble& output) {
    const auto f = superfidelity_features(output);
    const double cross = trace_product(f.mean_state, data_features.mean_state) +
                         f.mean_defect_root * data_features.mean_defect_root;
    const double self = trace_product(f.mean_state, f.mean_state) +
                        f.mean_defect_root * f.mean_defect_root;
    const double data_self =
        trace_product(data_features.mean_state, data_features.mean_state) +
        data_features.mean_defect_root * data_features.mean_defect_root;
    current->push_back(self + data_self - 2.0 * cross);
  };

  TrainResult& result = out.result;
  result.pipeline = BackwardPipeline(c.task.n_qubits, c.n_anc, c.layers, c.steps, c.ancilla);
  result.record.seed = streams.run.key();
  for (int t = c.steps; t >= 1; --t) {
    out.mmd_to_data.emplace_back();
    current = &out.mmd_to_data.back();
    result.record.steps.push_back(
        train_step(t, result.pipeline, out.trajectory, options, streams.run));
    const auto& rec = result.record.steps.back();
    if (progress) progress(t, rec.seconds, rec.final_loss);
  }
  return out;
}

std::vector<WeightedEnsemble> generate_test_trace(const BackwardPipeline& pipeline,
                                                  const ExperimentConfig& c,
                                                  MeasurementMode mode) {
  return generate_trace(pipeline, 0, c.test_samples(), mode, RunStreams(c.seed).generate);
}

MetricReport evaluate(TaskKind task, const WeightedEnsemble& gen, const WeightedEnsemble& data,
                      int bins) {
  if (gen.dim() != data.dim()) {
    throw InvalidArgument("evaluate: generated and data ensembles differ in dimension");
  }
  MetricReport r;
  r.task = task;
  r.n_generated = gen.size();
  r.n_data = data.size();
  if (gen.num_qubits() == 1) {
    r.fidelity_gen = mean_fidelity_to_zero(gen);
    r.fidelity_data = mean_fidelity_to_zero(data);
  } else if (task != TaskKind::kManyBody) {
    throw InvalidArgument("evaluate: task '" + task_name(task) + "' expects one qubit");
  }
  r.mx_gen = mean_magnetization_x(gen);
  r.mx_data = mean_magnetization_x(data);
  r.purity_gen = mean_purity(gen);
  r.purity_data = mean_purity(data);
  r.wasserstein = wasserstein(gen, data);
  r.mmd = mmd_distance(gen, data, MeanEstimator::kBiased);
  r.histogram_gen = mx_histogram(gen, bins);
  r.histogram_data = mx_histogram(data, bins);
  return r;
}

nlohmann::json to_json(const MetricReport& r) {
  auto mwe = [](const MeanWithError& m) {
    return nlohmann::json{{"mean", m.mean}, {"standard_error", m.standard_error}};
  };
  auto hist = [](const Histogram& h) {
    std::vector<double> centers;
    for (std::size_t b = 0; b < h.mass.size(); ++b) centers.push_back(h.bin_center(b));
    return nlohmann::json{{"lo", h.lo}, {"hi", h.hi}, {"bin_centers", centers}, {"mass", h.mass}};
  };
  nlohmann::json j = {
      {"task", task_name(r.task)},
      {"n_generated", r.n_generated},
      {"n_data", r.n_data},
      {"mx_gen", mwe(r.mx_gen)},
      {"mx_data", mwe(r.mx_data)},
      {"purity_gen", r.purity_gen},
      {"purity_data", r.purity_data},
      {"wasserstein", r.wasserstein},
      {"mmd", r.mmd},
      {"histogram_gen", hist(r.histogram_gen)},
      {"histogram_data", hist(r.histogram_data)},
  };
  if (r.task != TaskKind::kManyBody) {
    j["fidelity0_gen"] = mwe(r.fidelity_gen);
    j["fidelity0_data"] = mwe(r.fidelity_data);
  }
  switch (r.task) {
    case TaskKind::kClustered:
      j["headline"] = {{"metric", "fidelity0_gen"}, {"value", r.fidelity_gen.mean}};
      break;
    case TaskKind::kCircular:
      j["headline"] = {{"metric", "wasserstein"}, {"value", r.wasserstein}};
      break;
    case TaskKind::kManyBody:
      j["headline"] = {{"metric", "mx_gen"}, {"value", r.mx_gen.mean}};
      break;
  }
  return j;
}

MeanWithError wasserstein_data_baseline(const ExperimentConfig& c, int pairs) {
  if (pairs < 1) throw InvalidArgument("wasserstein_data_baseline: need pairs >= 1");
  const RandomStream base = RunStreams(c.seed).run.split(StreamTag::kBaseline);
  std::vector<double> values;
  for (int p = 0; p < pairs; ++p) {
    const auto pp = static_cast<std::uint64_t>(p);
    const auto a = generate_dataset(c.task, c.test_samples(), base.split(pp, 0));
    const auto b = generate_dataset(c.task, c.test_samples(), base.split(pp, 1));
    values.push_back(
        wasserstein(WeightedEnsemble::uniform(a.states), WeightedEnsemble::uniform(b.states)));
  }
  return weighted_mean(values, std::vector<double>(values.size(), 1.0 / pairs));
}

BackwardCurves backward_curves(const std::vector<WeightedEnsemble>& trace,
                               const ExperimentConfig& c) {
  const Dataset data = test_data(c);
  const auto trajectory = forward_trajectory(data.states, c.noise_schedule());
  const auto data0 = WeightedEnsemble::uniform(data.states);
  BackwardCurves curves;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const int t = c.steps - static_cast<int>(k);
    const auto forward = WeightedEnsemble::uniform(trajectory.at(t));
    curves.t.push_back(t);
    curves.purity_backward.push_back(mean_purity(trace[k]));
    curves.purity_forward.push_back(mean_purity(forward));
    curves.wass_backward.push_back(wasserstein(trace[k], data0));
    curves.wass_forward.push_back(wasserstein(forward, data0));
  }
  return curves;
}

double data_mean_purity(const TaskSpec& task) {
  if (task.kind == TaskKind::kManyBody) return 1.0;
  // q0 ~ U[0, m): E[(1 - q0)^2] = 1 - m + m^2 / 3, and a single-qubit
  // depolarized pure state has purity a^2 + (1 - a^2) / 2.
  const double m = task.q0_max;
  const double a2 = 1.0 - m + m * m / 3.0;
  return a2 + (1.0 - a2) / 2.0;
}

}  // namespace qdiffuse::harness
