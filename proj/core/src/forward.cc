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

#include "qdiffuse/forward.h"

#include <cmath>
#include <numbers>
#include <string>

#include "qdiffuse/errors.h"

namespace qdiffuse {
namespace {

void require_strength(double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw InvalidArgument("depolarizing strength must lie in (0, 1], got " +
                          std::to_string(q));
  }
}

}  // namespace

double NoiseSchedule::q(int t) const {
  if (t < 1 || t > steps()) {
    throw InvalidArgument("schedule step " + std::to_string(t) +
                          " outside [1, " + std::to_string(steps()) + "]");
  }
  return q_[static_cast<std::size_t>(t - 1)];
}

std::string NoiseSchedule::name() const {
  if (kind_ == ScheduleKind::kLinear) return "linear";
  if (exponent_ == 1) return "cosine";
  if (exponent_ == 2) return "cosine_square";
  return "cosine_k" + std::to_string(exponent_);
}

NoiseSchedule linear_schedule(int steps) {
  if (steps < 1) throw InvalidArgument("schedule needs T >= 1");
  NoiseSchedule s;
  s.kind_ = ScheduleKind::kLinear;
  s.q_.resize(static_cast<std::size_t>(steps));
  for (int t = 1; t <= steps; ++t) {
    s.q_[static_cast<std::size_t>(t - 1)] =
        static_cast<double>(t) / static_cast<double>(steps);
  }
  return s;
}

NoiseSchedule cosine_exponent_schedule(int steps, int exponent, double offset) {
  if (steps < 1) throw InvalidArgument("schedule needs T >= 1");
  if (exponent < 1) throw InvalidArgument("cosine exponent must be >= 1");
  if (!(offset > 0.0)) throw InvalidArgument("schedule offset must be > 0");
  auto f = [&](int t) {
    const double phase = (static_cast<double>(t) / steps + offset) /
                         (1.0 + offset) * (std::numbers::pi / 2.0);
    const double c = std::cos(phase);
    return c * c;
  };
  const double f0 = f(0);
  NoiseSchedule s;
  s.kind_ = ScheduleKind::kCosineExponent;
  s.exponent_ = exponent;
  s.offset_ = offset;
  s.q_.resize(static_cast<std::size_t>(steps));
  double prev = 1.0;
  for (int t = 1; t <= steps; ++t) {
    const double abar = f(t) / f0;
    s.q_[static_cast<std::size_t>(t - 1)] =
        std::pow(1.0 - abar / prev, exponent);
    prev = abar;
  }
  // f(T) is zero analytically; cos(pi/2) is not in floating point.
  s.q_.back() = 1.0;
  return s;
}

DensityMatrix depolarize(const DensityMatrix& rho, double q) {
  require_strength(q);
  const Eigen::Index d = rho.dim();
  Matrix out = (1.0 - q) * rho.matrix();
  out.diagonal().array() += q / static_cast<double>(d);
  return DensityMatrix::from_trusted(std::move(out));
}

DensityMatrix pswap_stochastic(const DensityMatrix& rho, double q,
                               RandomStream& rng) {
  require_strength(q);
  if (rng.uniform() < q) return maximally_mixed(rho.num_qubits());
  return rho;
}

const std::vector<DensityMatrix>& ForwardTrajectory::at(int t) const {
  if (t < 0 || t >= static_cast<int>(ensembles.size())) {
    throw InvalidArgument("trajectory step " + std::to_string(t) +
                          " out of range");
  }
  return ensembles[static_cast<std::size_t>(t)];
}

ForwardTrajectory forward_trajectory(std::span<const DensityMatrix> ensemble0,
                                     const NoiseSchedule& schedule) {
  if (ensemble0.empty()) throw InvalidArgument("forward_trajectory: empty ensemble");
  const Eigen::Index dim = ensemble0.front().dim();
  for (const auto& rho : ensemble0) {
    if (rho.dim() != dim) {
      throw InvalidArgument("forward_trajectory: mixed state dimensions");
    }
  }
  ForwardTrajectory traj;
  traj.schedule = schedule;
  traj.ensembles.reserve(static_cast<std::size_t>(schedule.steps()) + 1);
  traj.ensembles.emplace_back(ensemble0.begin(), ensemble0.end());
  for (int t = 1; t <= schedule.steps(); ++t) {
    const double q = schedule.q(t);
    std::vector<DensityMatrix> next;
    next.reserve(ensemble0.size());
    for (const auto& rho : traj.ensembles.back()) next.push_back(depolarize(rho, q));
    traj.ensembles.push_back(std::move(next));
  }
  return traj;
}

double cumulative_mixing(const NoiseSchedule& schedule, int t) {
  if (t < 0 || t > schedule.steps()) {
    throw InvalidArgument("cumulative_mixing: step " + std::to_string(t) +
                          " outside [0, T]");
  }
  double a = 1.0;
  for (int s = 1; s <= t; ++s) a *= 1.0 - schedule.q(s);
  return a;
}

double closed_form_purity(double p0, double a, double dim) {
  constexpr double kSlack = 1e-12;
  if (!(dim >= 2.0)) throw InvalidArgument("closed_form_purity: dim must be >= 2");
  if (p0 < 1.0 / dim - kSlack || p0 > 1.0 + kSlack) {
    throw InvalidArgument("closed_form_purity: P0 outside [1/d, 1]");
  }
  if (a < -kSlack || a > 1.0 + kSlack) {
    throw InvalidArgument("closed_form_purity: a_t outside [0, 1]");
  }
  return a * a * p0 + (1.0 - a * a) / dim;
}

double mean_purity(std::span<const DensityMatrix> ensemble) {
  if (ensemble.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& rho : ensemble) acc += purity(rho);
  return acc / static_cast<double>(ensemble.size());
}

}  // namespace qdiffuse
