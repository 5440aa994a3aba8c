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

#ifndef QDIFFUSE_FORWARD_H_
#define QDIFFUSE_FORWARD_H_

#include <span>
#include <string>
#include <vector>

#include "qdiffuse/random.h"
#include "qdiffuse/state.h"

namespace qdiffuse {

enum class ScheduleKind { kLinear, kCosineExponent };

inline constexpr double kDefaultScheduleOffset = 0.008;

// Per-step depolarizing strengths q_1..q_T of the forward process.
class NoiseSchedule {
 public:
  ScheduleKind kind() const { return kind_; }
  int steps() const { return static_cast<int>(q_.size()); }
  // Cosine exponent k; 0 for the linear schedule.
  int exponent() const { return exponent_; }
  double offset() const { return offset_; }

  // q_t for 1 <= t <= T.
  double q(int t) const;
  std::span<const double> values() const { return q_; }

  // "linear", "cosine", "cosine_square" or "cosine_k<k>".
  std::string name() const;

 private:
  friend NoiseSchedule linear_schedule(int steps);
  friend NoiseSchedule cosine_exponent_schedule(int steps, int exponent,
                                                double offset);

  ScheduleKind kind_ = ScheduleKind::kLinear;
  int exponent_ = 0;
  double offset_ = 0.0;
  std::vector<double> q_;
};

// q_t = t / T.
NoiseSchedule linear_schedule(int steps);

// q_t = (1 - abar_t / abar_{t-1})^k with abar_t = f(t) / f(0) and
// f(t) = cos^2(((t/T + offset) / (1 + offset)) * pi/2). q_T is exactly 1.
NoiseSchedule cosine_exponent_schedule(int steps, int exponent,
                                       double offset = kDefaultScheduleOffset);

// (1 - q) rho + q I/d.
DensityMatrix depolarize(const DensityMatrix& rho, double q);

// One shot of the p-SWAP realization: the register is swapped with a fresh
// maximally mixed register with probability q, otherwise left alone. Averaged
// over shots this is `depolarize`.
DensityMatrix pswap_stochastic(const DensityMatrix& rho, double q,
                               RandomStream& rng);

// Ensembles {rho_0}, ..., {rho_T} under the exact channel.
struct ForwardTrajectory {
  std::vector<std::vector<DensityMatrix>> ensembles;
  NoiseSchedule schedule;

  int steps() const { return schedule.steps(); }
  const std::vector<DensityMatrix>& at(int t) const;
};

ForwardTrajectory forward_trajectory(std::span<const DensityMatrix> ensemble0,
                                     const NoiseSchedule& schedule);

// a_t = prod_{s<=t} (1 - q_s); a_0 = 1.
double cumulative_mixing(const NoiseSchedule& schedule, int t);

// Purity of a rho_0 + (1 - a) I/d when Tr rho_0^2 = p0:
// a^2 p0 + (1 - a^2) / d.
double closed_form_purity(double p0, double a, double dim);

double mean_purity(std::span<const DensityMatrix> ensemble);

}  // namespace qdiffuse

#endif  // QDIFFUSE_FORWARD_H_
