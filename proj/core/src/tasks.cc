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

#include "qdiffuse/tasks.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdiffuse/errors.h"
#include "qdiffuse/forward.h"

namespace qdiffuse {
namespace {

void require_samples(int n_samples) {
  if (n_samples < 1) throw InvalidArgument("dataset: need n_samples >= 1");
}

void require_q0(const TaskSpec& spec) {
  if (!(spec.q0_max >= 0.0 && spec.q0_max <= 1.0)) {
    throw InvalidArgument("dataset: q0_max outside [0, 1]");
  }
}

// (1 - q0)|psi><psi| + q0 I/2, allowing q0 = 0.
DensityMatrix depolarized_pure(const PureState& psi, double q0) {
  const DensityMatrix pure = density_from_pure(psi);
  return q0 > 0.0 ? depolarize(pure, q0) : pure;
}

}  // namespace

TaskSpec default_task(TaskKind kind) {
  TaskSpec s;
  s.kind = kind;
  switch (kind) {
    case TaskKind::kClustered:
      s.q0_max = 0.01;
      break;
    case TaskKind::kCircular:
      s.q0_max = 0.04;
      break;
    case TaskKind::kManyBody:
      s.n_qubits = 4;
      break;
  }
  return s;
}

std::string task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kClustered:
      return "clustered";
    case TaskKind::kCircular:
      return "circular";
    case TaskKind::kManyBody:
      return "manybody";
  }
  return "";
}

TaskKind parse_task(const std::string& name) {
  if (name == "clustered") return TaskKind::kClustered;
  if (name == "circular") return TaskKind::kCircular;
  if (name == "manybody") return TaskKind::kManyBody;
  throw InvalidArgument("unknown task '" + name + "'");
}

std::string boundary_name(Boundary b) {
  return b == Boundary::kOpen ? "open" : "periodic";
}

Boundary parse_boundary(const std::string& name) {
  if (name == "open") return Boundary::kOpen;
  if (name == "periodic") return Boundary::kPeriodic;
  throw InvalidArgument("unknown boundary '" + name + "'");
}

Dataset gen_clustered(int n_samples, const RandomStream& rng, const TaskSpec& spec) {
  require_samples(n_samples);
  require_q0(spec);
  if (spec.n_qubits != 1) throw InvalidArgument("clustered task is single-qubit");
  Dataset ds;
  ds.kind = TaskKind::kClustered;
  for (int i = 0; i < n_samples; ++i) {
    RandomStream r = rng.split(static_cast<std::uint64_t>(i));
    const cplx c = r.complex_normal();
    const double q0 = r.uniform(0.0, spec.q0_max);
    Vector amp(2);
    amp << 1.0, spec.epsilon0 * c;
    ds.states.push_back(depolarized_pure(PureState::from_amplitudes(amp), q0));
    ds.q0.push_back(q0);
  }
  return ds;
}

Dataset gen_circular(int n_samples, const RandomStream& rng, const TaskSpec& spec) {
  require_samples(n_samples);
  require_q0(spec);
  if (spec.n_qubits != 1) throw InvalidArgument("circular task is single-qubit");
  Dataset ds;
  ds.kind = TaskKind::kCircular;
  for (int i = 0; i < n_samples; ++i) {
    RandomStream r = rng.split(static_cast<std::uint64_t>(i));
    const double theta = r.uniform(0.0, 2.0 * std::numbers::pi);
    const double q0 = r.uniform(0.0, spec.q0_max);
    Vector amp(2);
    amp << std::cos(theta / 2.0), std::sin(theta / 2.0);
    ds.states.push_back(depolarized_pure(PureState::from_amplitudes(amp), q0));
    ds.q0.push_back(q0);
    ds.theta0.push_back(theta);
  }
  return ds;
}

Dataset gen_manybody(int n_samples, const RandomStream& rng, const TaskSpec& spec) {
  require_samples(n_samples);
  if (!(spec.g_min < spec.g_max)) throw InvalidArgument("manybody: empty g range");
  Dataset ds;
  ds.kind = TaskKind::kManyBody;
  for (int i = 0; i < n_samples; ++i) {
    RandomStream r = rng.split(static_cast<std::uint64_t>(i));
    const double g = r.uniform(spec.g_min, spec.g_max);
    ds.states.push_back(
        density_from_pure(tfim_ground_state(spec.n_qubits, g, spec.boundary)));
    ds.g.push_back(g);
  }
  return ds;
}

Dataset generate_dataset(const TaskSpec& spec, int n_samples, const RandomStream& rng) {
  switch (spec.kind) {
    case TaskKind::kClustered:
      return gen_clustered(n_samples, rng, spec);
    case TaskKind::kCircular:
      return gen_circular(n_samples, rng, spec);
    case TaskKind::kManyBody:
      return gen_manybody(n_samples, rng, spec);
  }
  throw InvalidArgument("generate_dataset: unknown task");
}

RealMatrix tfim_hamiltonian(int n, double g, Boundary boundary) {
  if (n < 1 || n > 12) throw InvalidArgument("tfim: need 1 <= n <= 12");
  const Eigen::Index dim = Eigen::Index{1} << n;
  RealMatrix h = RealMatrix::Zero(dim, dim);
  auto bit = [n](Eigen::Index s, int q) { return (s >> (n - 1 - q)) & 1; };
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < n; ++i) bonds.emplace_back(i, i + 1);
  if (boundary == Boundary::kPeriodic && n > 2) bonds.emplace_back(n - 1, 0);
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (const auto& [a, b] : bonds) {
      h(s, s) -= bit(s, a) == bit(s, b) ? 1.0 : -1.0;
    }
    for (int q = 0; q < n; ++q) {
      h(s ^ (Eigen::Index{1} << (n - 1 - q)), s) -= g;
    }
  }
  return h;
}

PureState tfim_ground_state(int n, double g, Boundary boundary) {
  if (n < 2) throw InvalidArgument("tfim: need at least two sites");
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(tfim_hamiltonian(n, g, boundary));
  if (solver.info() != Eigen::Success) throw NumericalError("tfim: eigensolver failed");
  const auto& ev = solver.eigenvalues();
  if (ev(1) - ev(0) < 1e-10) throw NumericalError("tfim: degenerate ground space");
  Eigen::VectorXd v = solver.eigenvectors().col(0);
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
  return PureState::from_amplitudes(v.cast<cplx>());
}

MeanWithError weighted_mean(const std::vector<double>& values,
                            const std::vector<double>& weights) {
  if (values.size() != weights.size() || values.empty()) {
    throw InvalidArgument("weighted_mean: size mismatch or empty input");
  }
  double total = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    total += weights[i];
    mean += weights[i] * values[i];
  }
  if (!(total > 0.0)) throw InvalidArgument("weighted_mean: zero total weight");
  mean /= total;
  double w2 = 0.0;
  double spread = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = weights[i] / total;
    w2 += w * w;
    spread += w * (values[i] - mean) * (values[i] - mean);
  }
  MeanWithError out;
  out.mean = mean;
  if (1.0 - w2 > 1e-15) out.standard_error = std::sqrt(spread / (1.0 - w2) * w2);
  return out;
}

double magnetization_x(const DensityMatrix& rho) {
  const int n = rho.num_qubits();
  const Eigen::Index dim = rho.dim();
  double acc = 0.0;
  for (int q = 0; q < n; ++q) {
    const Eigen::Index flip = Eigen::Index{1} << (n - 1 - q);
    for (Eigen::Index j = 0; j < dim; ++j) acc += rho(j ^ flip, j).real();
  }
  return acc / n;
}

MeanWithError mean_magnetization_x(const WeightedEnsemble& ensemble) {
  std::vector<double> values;
  for (const auto& m : ensemble) values.push_back(magnetization_x(m.state));
  return weighted_mean(values, ensemble.weights());
}

MeanWithError mean_fidelity_to_zero(const WeightedEnsemble& ensemble) {
  std::vector<double> values;
  for (const auto& m : ensemble) {
    if (m.state.num_qubits() != 1) {
      throw InvalidArgument("mean_fidelity_to_zero: members must be single-qubit");
    }
    values.push_back(m.state(0, 0).real());
  }
  return weighted_mean(values, ensemble.weights());
}

double Histogram::bin_center(std::size_t b) const {
  const double width = (hi - lo) / static_cast<double>(mass.size());
  return lo + (static_cast<double>(b) + 0.5) * width;
}

Histogram mx_histogram(const WeightedEnsemble& ensemble, int bins) {
  if (bins < 1) throw InvalidArgument("mx_histogram: need bins >= 1");
  Histogram h;
  h.mass.assign(static_cast<std::size_t>(bins), 0.0);
  for (const auto& m : ensemble) {
    const double x = std::clamp(magnetization_x(m.state), h.lo, h.hi);
    auto b = static_cast<std::size_t>((x - h.lo) / (h.hi - h.lo) * bins);
    b = std::min(b, h.mass.size() - 1);
    h.mass[b] += m.weight;
  }
  return h;
}

}  // namespace qdiffuse
