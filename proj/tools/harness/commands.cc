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

#include "commands.h"

#include <chrono>
#include <iomanip>

#include "experiment.h"
#include "io.h"
#include "qdiffuse/checkpoint.h"

namespace qdiffuse::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kManifestSchemaVersion = 1;

json manifest_header(const std::string& command, const LoadedConfig& loaded,
                     const ExperimentConfig& config) {
  return {{"schema_version", kManifestSchemaVersion},
          {"version", QDIFFUSE_VERSION},
          {"command", command},
          {"config_file", loaded.path.filename().string()},
          {"config_hash", loaded.hash},
          {"config", to_json(config)},
          {"seed", config.seed},
          {"stream_keys", RunStreams(config.seed).keys()}};
}

std::vector<std::string> provenance_header(TaskKind kind) {
  switch (kind) {
    case TaskKind::kClustered: return {"q0"};
    case TaskKind::kCircular: return {"q0", "theta0"};
    case TaskKind::kManyBody: return {"g"};
  }
  return {};
}

std::vector<std::vector<CsvCell>> provenance_rows(const Dataset& d) {
  std::vector<std::vector<CsvCell>> rows(d.states.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    switch (d.kind) {
      case TaskKind::kClustered: rows[i] = {d.q0[i]}; break;
      case TaskKind::kCircular: rows[i] = {d.q0[i], d.theta0[i]}; break;
      case TaskKind::kManyBody: rows[i] = {d.g[i]}; break;
    }
  }
  return rows;
}

void write_dataset_csv(const fs::path& path, const Dataset& d,
                       std::span<const DensityMatrix> states) {
  write_ensemble_csv(path, WeightedEnsemble::uniform(states), provenance_rows(d),
                     provenance_header(d.kind));
}

ExperimentConfig effective(const LoadedConfig& loaded, const Overrides& o) {
  ExperimentConfig c = loaded.config;
  apply_overrides(c, o);
  return c;
}

double headline_value(const MetricReport& r) {
  switch (r.task) {
    case TaskKind::kClustered: return r.fidelity_gen.mean;
    case TaskKind::kCircular: return r.wasserstein;
    case TaskKind::kManyBody: return r.mx_gen.mean;
  }
  return 0.0;
}

std::string headline_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kClustered: return "F0_gen";
    case TaskKind::kCircular: return "Wass_gen";
    case TaskKind::kManyBody: return "Mx_gen";
  }
  return "";
}

}  // namespace

void apply_overrides(ExperimentConfig& c, const Overrides& o) {
  if (o.seed) c.seed = *o.seed;
  if (o.mode) c.mode = *o.mode;
  if (o.engine) c.engine.kind = *o.engine;
  if (o.n_test) {
    if (*o.n_test < 1) throw ConfigError("--n-test must be positive");
    c.n_test = *o.n_test;
  }
  if (c.engine.kind == GradientKind::kParamShift && c.mode == MeasurementMode::kStochastic) {
    throw ConfigError("engine 'paramshift' requires measurement_mode 'enumerate'");
  }
}

void cmd_schedule_dump(const LoadedConfig& loaded, const Overrides& o, const fs::path& out,
                       std::ostream& log) {
  const ExperimentConfig c = effective(loaded, o);
  prepare_output_dir(out);
  std::vector<NoiseSchedule> schedules = {linear_schedule(c.steps),
                                          cosine_exponent_schedule(c.steps, 1, c.schedule_offset),
                                          cosine_exponent_schedule(c.steps, 2, c.schedule_offset)};
  if (c.schedule == ScheduleKind::kCosineExponent && c.schedule_exponent > 2) {
    schedules.push_back(c.noise_schedule());
  }
  const double p0 = data_mean_purity(c.task);
  const double dim = std::ldexp(1.0, c.task.n_qubits);
  CsvWriter csv(out / "schedule.csv", {"schedule", "t", "q_t", "a_t", "mean_purity"});
  for (const auto& s : schedules) {
    for (int t = 0; t <= s.steps(); ++t) {
      const double a = cumulative_mixing(s, t);
      csv.row({s.name(), static_cast<std::int64_t>(t), t == 0 ? 0.0 : s.q(t), a,
               closed_form_purity(p0, a, dim)});
    }
  }
  csv.close();
  json manifest = manifest_header("schedule-dump", loaded, c);
  manifest["data_mean_purity"] = p0;
  write_json(out / "manifest.json", manifest);
  log << "wrote " << (out / "schedule.csv").string() << "\n";
}

void cmd_forward(const LoadedConfig& loaded, const Overrides& o, const fs::path& out,
                 std::ostream& log) {
  const ExperimentConfig c = effective(loaded, o);
  prepare_output_dir(out);
  const Dataset data = test_data(c);
  const auto trajectory = forward_trajectory(data.states, c.noise_schedule());
  const double dim = std::ldexp(1.0, c.task.n_qubits);
  CsvWriter purity_csv(out / "purity.csv",
                       {"t", "q_t", "a_t", "mean_purity", "closed_form_mean_purity"});
  for (int t = 0; t <= c.steps; ++t) {
    const auto& ens = trajectory.at(t);
    write_dataset_csv(out / ("forward_t" + std::to_string(t) + ".csv"), data, ens);
    const double a = cumulative_mixing(trajectory.schedule, t);
    double closed = 0.0;
    for (const auto& rho : data.states) closed += closed_form_purity(purity(rho), a, dim);
    closed /= static_cast<double>(data.states.size());
    purity_csv.row({static_cast<std::int64_t>(t), t == 0 ? 0.0 : trajectory.schedule.q(t), a,
                    mean_purity(ens), closed});
  }
  purity_csv.close();
  write_json(out / "manifest.json", manifest_header("forward", loaded, c));
  log << "wrote " << c.steps + 1 << " forward ensembles to " << out.string() << "\n";
}

void cmd_train(const LoadedConfig& loaded, const Overrides& o, const fs::path& out,
               std::ostream& log) {
  const ExperimentConfig c = effective(loaded, o);
  require_register(c);
  prepare_output_dir(out);
  const auto start = std::chrono::steady_clock::now();
  const TrainRun run = run_training(c, [&](int t, double seconds, double final_loss) {
    log << "step " << t << ": final loss " << std::setprecision(6) << final_loss << " ("
        << std::fixed << std::setprecision(1) << seconds << " s)" << std::defaultfloat
        << std::endl;
  });
  const auto& record = run.result.record;

  Checkpoint cp;
  cp.config = to_json(c);
  cp.config_hash = loaded.hash;
  cp.seed = c.seed;
  cp.stream_keys = RunStreams(c.seed).keys();
  cp.pipeline = run.result.pipeline;
  save_checkpoint(out / "checkpoint.json", cp);

  CsvWriter loss_csv(out / "loss.csv",
                     {"step", "iteration", "loss", "learning_rate", "mmd_to_data"});
  json steps = json::array();
  json timing = json::array();
  for (std::size_t s = 0; s < record.steps.size(); ++s) {
    const auto& r = record.steps[s];
    for (std::size_t i = 0; i < r.loss.size(); ++i) {
      loss_csv.row({static_cast<std::int64_t>(r.step), static_cast<std::int64_t>(i), r.loss[i],
                    r.learning_rate[i], run.mmd_to_data[s][i]});
    }
    steps.push_back({{"t", r.step},
                     {"iterations", r.loss.size()},
                     {"initial_loss", r.loss.empty() ? r.final_loss : r.loss.front()},
                     {"final_loss", r.final_loss}});
    timing.push_back({{"t", r.step}, {"seconds", r.seconds}});
  }
  loss_csv.close();

  const auto trace = generate_test_trace(run.result.pipeline, c);
  const Dataset data = test_data(c);
  const MetricReport report = evaluate(c.task.kind, trace.back(),
                                       WeightedEnsemble::uniform(data.states), c.histogram_bins);

  json manifest = manifest_header("train", loaded, c);
  manifest["total_params"] = run.result.pipeline.total_params();
  manifest["steps"] = steps;
  manifest["metrics"] = to_json(report);
  write_json(out / "manifest.json", manifest);
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(out / "timing.json", {{"steps", timing}, {"total_seconds", total}});
  log << headline_name(c.task.kind) << " = " << std::setprecision(6) << headline_value(report)
      << "\n";
}

void cmd_generate(const fs::path& checkpoint_path, const std::optional<LoadedConfig>& loaded,
                  const Overrides& o, const fs::path& out, std::ostream& log) {
  const Checkpoint cp = load_checkpoint(checkpoint_path);
  if (loaded && loaded->hash != cp.config_hash) {
    throw ConfigError("configuration hash " + loaded->hash +
                      " does not match the checkpoint's " + cp.config_hash);
  }
  ExperimentConfig c;
  try {
    c = parse_config(cp.config);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("checkpoint configuration: ") + e.what());
  }
  Overrides generation = o;
  generation.mode.reset();
  apply_overrides(c, generation);
  const auto& p = cp.pipeline;
  if (p.num_data_qubits() != c.task.n_qubits || p.num_ancillas() != c.n_anc ||
      p.num_layers() != c.layers || p.steps() != c.steps) {
    throw ConfigError("checkpoint pipeline shape disagrees with its configuration");
  }
  prepare_output_dir(out);
  const MeasurementMode mode = o.mode.value_or(MeasurementMode::kStochastic);
  const auto trace = generate_test_trace(p, c, mode);
  const Dataset data = test_data(c);

  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    write_ensemble_csv(out / ("backward_t" + std::to_string(c.steps - static_cast<int>(k)) + ".csv"),
                       trace[k]);
  }
  write_ensemble_csv(out / "generated.csv", trace.back());
  write_dataset_csv(out / "data.csv", data, data.states);

  const BackwardCurves curves = backward_curves(trace, c);
  CsvWriter csv(out / "backward_metrics.csv",
                {"t", "mean_purity_backward", "mean_purity_forward", "wass_backward_to_data",
                 "wass_forward_to_data", "mean_metric_backward"});
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double metric = c.task.n_qubits == 1 ? mean_fidelity_to_zero(trace[k]).mean
                                               : mean_magnetization_x(trace[k]).mean;
    csv.row({static_cast<std::int64_t>(curves.t[k]), curves.purity_backward[k],
             curves.purity_forward[k], curves.wass_backward[k], curves.wass_forward[k], metric});
  }
  csv.close();

  LoadedConfig echo;
  echo.path = checkpoint_path;
  echo.hash = cp.config_hash;
  json manifest = manifest_header("generate", echo, c);
  manifest["measurement_mode"] = mode_name(mode);
  manifest["n_generated"] = trace.back().size();
  write_json(out / "manifest.json", manifest);
  log << "wrote " << trace.back().size() << " generated states to "
      << (out / "generated.csv").string() << "\n";
}

void cmd_eval(const fs::path& generated, const fs::path& data, TaskKind task, int bins,
              const fs::path& out, std::ostream& log) {
  const WeightedEnsemble gen = read_ensemble_csv(generated);
  const WeightedEnsemble ref = read_ensemble_csv(data);
  if (task == TaskKind::kManyBody ? gen.num_qubits() < 2 : gen.num_qubits() != 1) {
    throw ConfigError("task '" + task_name(task) + "' does not match a " +
                      std::to_string(gen.num_qubits()) + "-qubit dump");
  }
  const MetricReport report = evaluate(task, gen, ref, bins);
  prepare_output_dir(out);
  write_json(out / "metrics.json", to_json(report));
  log << headline_name(task) << " = " << std::setprecision(6) << headline_value(report) << "\n";
}

void cmd_benchmark_fig5(const std::vector<LoadedConfig>& configs, const Overrides& o,
                        const fs::path& out, std::ostream& log) {
  if (configs.size() != 2) throw ConfigError("benchmark-fig5 takes exactly two --config files");
  std::vector<ExperimentConfig> cs;
  for (const auto& l : configs) {
    cs.push_back(effective(l, o));
    require_register(cs.back());
  }
  prepare_output_dir(out);
  json summary = json::array();
  CsvWriter csv(out / "fig5.csv", {"config", "step", "iteration", "total_updates", "loss",
                                   "mmd_to_data"});
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const auto& c = cs[k];
    const std::string label = configs[k].path.stem().string();
    const std::size_t total = parameter_count(c.task.n_qubits, c.n_anc, c.layers, c.steps);
    const std::size_t per_step = total / static_cast<std::size_t>(c.steps);
    log << label << ": " << total << " parameters (" << per_step << " per step)" << std::endl;
    const TrainRun run = run_training(c, [&](int t, double seconds, double final_loss) {
      log << "  step " << t << ": final loss " << final_loss << " (" << seconds << " s)"
          << std::endl;
    });
    std::int64_t updates = 0;
    double last = 0.0;
    const auto& steps = run.result.record.steps;
    for (std::size_t s = 0; s < steps.size(); ++s) {
      for (std::size_t i = 0; i < steps[s].loss.size(); ++i) {
        updates += static_cast<std::int64_t>(per_step);
        last = run.mmd_to_data[s][i];
        csv.row({label, static_cast<std::int64_t>(steps[s].step), static_cast<std::int64_t>(i),
                 updates, steps[s].loss[i], last});
      }
    }
    const auto trace = generate_test_trace(run.result.pipeline, c);
    const Dataset data = test_data(c);
    const double test_mmd = mmd_distance(trace.back(), WeightedEnsemble::uniform(data.states),
                                         MeanEstimator::kBiased);
    summary.push_back({{"config", label},
                       {"config_hash", configs[k].hash},
                       {"total_params", total},
                       {"params_per_step", per_step},
                       {"total_updates", updates},
                       {"final_mmd_to_data", last},
                       {"generated_test_mmd", test_mmd}});
    log << label << ": final MMD " << last << ", generated test MMD " << test_mmd << std::endl;
  }
  csv.close();
  write_json(out / "summary.json", {{"schema_version", kManifestSchemaVersion}, {"runs", summary}});
}

}  // namespace qdiffuse::harness
