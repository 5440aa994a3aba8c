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

#ifndef QDIFFUSE_TASKS_H_
#define QDIFFUSE_TASKS_H_

#include <string>
#include <vector>

#include "qdiffuse/ensemble.h"
#include "qdiffuse/random.h"
#include "qdiffuse/state.h"

namespace qdiffuse {

enum class TaskKind { kClustered, kCircular, kManyBody };
enum class Boundary { kOpen, kPeriodic };

struct TaskSpec {
  TaskKind kind = TaskKind::kClustered;
  int n_qubits = 1;
  // Clustered: |psi> ~ |0> + epsilon0 c |1>, c complex normal.
  double epsilon0 = 0.08;
  // Clustered and circular: depolarizing strength q0 ~ U[0, q0_max).
  double q0_max = 0.01;
  // Many-body: field g ~ U[g_min, g_max).
  double g_min = 1.8;
  double g_max = 2.2;
  Boundary boundary = Boundary::kOpen;
};

// Standard settings for each task; n_qubits is 1 for the single-qubit tasks and
// 4 for the many-body task.
TaskSpec default_task(TaskKind kind);

std::string task_name(TaskKind kind);
TaskKind parse_task(const std::string& name);
std::string boundary_name(Boundary b);
Boundary parse_boundary(const std::string& name);

// Samples plus the random variates that produced them. Unused provenance
// columns are left empty.
struct Dataset {
  TaskKind kind = TaskKind::kClustered;
  std::vector<DensityMatrix> states;
  std::vector<double> q0;
  std::vector<double> theta0;
  std::vector<double> g;
};

// Sample i is drawn from rng.split(i), so a longer dataset extends a shorter
// one drawn from the same stream.
Dataset gen_clustered(int n_samples, const RandomStream& rng,
                      const TaskSpec& spec = default_task(TaskKind::kClustered));
Dataset gen_circular(int n_samples, const RandomStream& rng,
                     const TaskSpec& spec = default_task(TaskKind::kCircular));
Dataset gen_manybody(int n_samples, const RandomStream& rng,
                     const TaskSpec& spec = default_task(TaskKind::kManyBody));
Dataset generate_dataset(const TaskSpec& spec, int n_samples, const RandomStream& rng);

// H = -(sum_i Z_i Z_{i+1} + g sum_i X_i); the periodic chain adds the bond
// (n-1, 0) for n > 2.
RealMatrix tfim_hamiltonian(int n, double g, Boundary boundary);

// Ground state with the largest-magnitude amplitude real and positive.
// Throws NumericalError if the two lowest levels are closer than 1e-10.
PureState tfim_ground_state(int n, double g, Boundary boundary);

struct MeanWithError {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Weighted mean of per-member values with the standard error of the weighted
// mean, sqrt(sum w_i^2 * s^2) where s^2 is the reliability-weighted unbiased
// variance. Reduces to s / sqrt(N) for uniform weights.
MeanWithError weighted_mean(const std::vector<double>& values,
                            const std::vector<double>& weights);

// Tr(rho sum_i X_i) / n.
double magnetization_x(const DensityMatrix& rho);
MeanWithError mean_magnetization_x(const WeightedEnsemble& ensemble);

// <0|rho|0> for single-qubit members.
MeanWithError mean_fidelity_to_zero(const WeightedEnsemble& ensemble);

struct Histogram {
  double lo = -1.0;
  double hi = 1.0;
  std::vector<double> mass;  // sums to the total member weight
  double bin_center(std::size_t b) const;
};

// Weighted histogram of M_x over [-1, 1]; M_x = 1 falls in the last bin.
Histogram mx_histogram(const WeightedEnsemble& ensemble, int bins = 60);

}  // namespace qdiffuse

#endif  // QDIFFUSE_TASKS_H_
