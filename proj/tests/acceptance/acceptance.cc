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

// Runs the numbered acceptance criteria and prints one PASS/FAIL line each.
//
//   acceptance                 all criteria
//   acceptance --criterion 6   one criterion
//
// Exit status is 0 only if every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.h"
#include "experiment.h"
#include "oracles.h"
#include "qdiffuse/circuit.h"
#include "qdiffuse/errors.h"
#include "qdiffuse/forward.h"
#include "qdiffuse/losses.h"
#include "qdiffuse/tasks.h"
#include "qdiffuse/trainer.h"
#include "qdiffuse/transport.h"

namespace qdiffuse {
namespace {

using harness::ExperimentConfig;

// Accumulates named checks; a criterion passes when all of them do.
class Verdict {
 public:
  void check(bool ok, const std::string& what) {
    checks_.push_back((ok ? "ok " : "FAILED ") + what);
    failed_ += ok ? 0 : 1;
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool passed() const { return failed_ == 0; }

  std::string summary() const {
    std::ostringstream out;
    out << checks_.size() - failed_ << "/" << checks_.size() << " checks";
    for (const auto& n : notes_) out << "; " << n;
    for (const auto& c : checks_) out << "; " << c;
    return out.str();
  }

 private:
  std::size_t failed_ = 0;
  std::vector<std::string> notes_;
  std::vector<std::string> checks_;
};

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

ExperimentConfig config(const std::string& name) {
  return harness::load_config(std::string(QDIFFUSE_CONFIG_DIR) + "/" + name + ".json").config;
}

// ---------------------------------------------------------------------------

Verdict algebraic_invariants() {
  Verdict v;
  RandomStream rng(1001);
  for (int n : {1, 2, 4}) {
    double worst_g_self = 0.0;
    double worst_bound = 0.0;
    bool states_ok = true;
    for (int k = 0; k < 1000; ++k) {
      const auto a = k % 2 ? testing::random_density(n, rng) : testing::random_pure_density(n, rng);
      const auto b = k % 3 ? testing::random_density(n, rng) : testing::random_pure_density(n, rng);
      states_ok = states_ok && inspect_state(a.matrix()).within() && inspect_state(b.matrix()).within();
      worst_g_self = std::max(worst_g_self, std::abs(superfidelity(a, a) - 1.0));
      worst_bound = std::max(worst_bound, uhlmann_fidelity(a, b) - superfidelity(a, b));
    }
    const std::string d = "d=" + std::to_string(1 << n);
    v.check(states_ok, "density-matrix invariants " + d);
    v.check(worst_g_self <= 1e-12, "G(rho,rho)=1 " + d + " (" + fmt(worst_g_self) + ")");
    v.check(worst_bound <= 1e-9, "G >= F " + d + " (" + fmt(worst_bound) + ")");
  }
  for (int k = 0; k < 20; ++k) {
    const auto a = testing::random_ensemble(1 + k % 3, 8, rng);
    double total = 0.0;
    for (const auto& m : a) total += m.weight;
    v.check(std::abs(total - 1.0) <= 1e-12, "ensemble weights sum to one");
    v.check(std::abs(mmd_distance(a, a, MeanEstimator::kBiased)) <= 1e-12, "MMD(A,A)=0");
    v.check(wasserstein(a, a) <= 1e-9, "Wasserstein(A,A)=0");
  }
  for (int k = 0; k < 20; ++k) {
    const auto a = testing::random_density(1 + k % 2, rng);
    const auto b = testing::random_density(1 + k % 3, rng);
    const auto ab = tensor(a, b);
    std::vector<int> keep_a(static_cast<std::size_t>(a.num_qubits()));
    std::iota(keep_a.begin(), keep_a.end(), 0);
    std::vector<int> keep_b(static_cast<std::size_t>(b.num_qubits()));
    std::iota(keep_b.begin(), keep_b.end(), a.num_qubits());
    v.check((partial_trace(ab, keep_a).matrix() - a.matrix()).norm() <= 1e-12, "Tr_B(a x b) = a");
    v.check((partial_trace(ab, keep_b).matrix() - b.matrix()).norm() <= 1e-12, "Tr_A(a x b) = b");
    v.check(std::abs(purity(ab) - purity(a) * purity(b)) <= 1e-12, "purity multiplies");
    const int n = ab.num_qubits();
    const std::vector<int> keep = {0, n - 1};
    v.check((partial_trace(ab, keep).matrix() - testing::naive_partial_trace(ab.matrix(), n, keep))
                    .norm() <= 1e-12,
            "partial trace matches the Kronecker oracle");
  }
  return v;
}

Verdict transport_oracles() {
  Verdict v;
  RandomStream rng(1002);
  double worst_square = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int n = 2 + k % 5;
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform();
    const std::vector<double> w(static_cast<std::size_t>(n), 1.0 / n);
    const auto plan = solve_transport(cost, w, w);
    worst_square = std::max(worst_square, std::abs(plan.value - testing::brute_force_assignment(cost)));
  }
  v.check(worst_square <= 1e-9, "square problems match brute force (" + fmt(worst_square) + ")");
  double worst_gap = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int rows = 1 + k % 8;
    const int cols = 1 + (k * 5 + 3) % 8;
    Eigen::MatrixXd cost(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) cost(i, j) = rng.uniform();
    auto marginal = [&](int size) {
      std::vector<double> m(static_cast<std::size_t>(size));
      double total = 0.0;
      for (auto& x : m) total += (x = 0.05 + rng.uniform());
      for (auto& x : m) x /= total;
      return m;
    };
    const auto r = marginal(rows);
    const auto s = marginal(cols);
    const auto plan = solve_transport(cost, r, s);
    worst_gap = std::max(worst_gap, testing::transport_certificate_gap(
                                        cost, r, s, plan.plan, plan.row_potential,
                                        plan.col_potential));
  }
  v.check(worst_gap <= 1e-8, "rectangular certificates (" + fmt(worst_gap) + ")");
  return v;
}

Verdict forward_closed_form() {
  Verdict v;
  for (auto kind : {TaskKind::kClustered, TaskKind::kCircular, TaskKind::kManyBody}) {
    const TaskSpec spec = default_task(kind);
    const auto data = generate_dataset(spec, 50, RandomStream(1003));
    const double dim = std::ldexp(1.0, spec.n_qubits);
    std::vector<std::vector<double>> closed;
    for (const auto& schedule : {linear_schedule(6), cosine_exponent_schedule(6, 1),
                                 cosine_exponent_schedule(6, 2)}) {
      const auto traj = forward_trajectory(data.states, schedule);
      double worst = 0.0;
      std::vector<double> curve;
      for (int t = 0; t <= 6; ++t) {
        const double a = cumulative_mixing(schedule, t);
        double expected = 0.0;
        for (const auto& rho : data.states) expected += closed_form_purity(purity(rho), a, dim);
        expected /= static_cast<double>(data.states.size());
        worst = std::max(worst, std::abs(mean_purity(traj.at(t)) - expected));
        curve.push_back(expected);
      }
      v.check(worst <= 1e-10, task_name(kind) + "/" + schedule.name() + " closed form (" +
                                  fmt(worst) + ")");
      if (kind == TaskKind::kManyBody) {
        v.check(mean_purity(traj.at(6)) == 0.0625,
                "n=4 final purity " + fmt(mean_purity(traj.at(6)), 17));
      }
      closed.push_back(curve);
    }
    bool ordered = true;
    for (int t = 1; t < 6; ++t) {
      ordered = ordered && closed[2][t] >= closed[1][t] && closed[1][t] >= closed[0][t];
    }
    v.check(ordered, task_name(kind) + " schedule ordering cos^2 >= cos >= linear");
  }
  return v;
}

Verdict pswap_equivalence() {
  Verdict v;
  RandomStream rng(1004);
  const auto rho = testing::random_density(1, rng);
  const int trials = 100000;
  for (double q : {0.1, 0.5, 0.9}) {
    Matrix sum = Matrix::Zero(2, 2);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(2, 2);
    for (int k = 0; k < trials; ++k) {
      const Matrix s = pswap_stochastic(rho, q, rng).matrix();
      sum += s;
      sum_sq += s.cwiseAbs2();
    }
    const Matrix mean = sum / trials;
    const Matrix exact = depolarize(rho, q).matrix();
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double var = sum_sq(i, j) / trials - std::norm(mean(i, j));
        const double sigma = std::sqrt(std::max(var, 0.0) / trials);
        worst = std::max(worst, std::abs(mean(i, j) - exact(i, j)) / std::max(sigma, 1e-300));
      }
    }
    v.check(worst <= 5.0, "q=" + fmt(q) + " within 5 sigma (" + fmt(worst, 3) + " sigma)");
  }
  return v;
}

struct RandomStep {
  CircuitStep step;
  StepProblem problem;
};

RandomStep random_step(std::uint64_t seed, LossKind loss, MeasurementMode mode) {
  RandomStream rng(seed);
  const int nd = 1 + static_cast<int>(seed % 2);
  const int na = 1 + static_cast<int>((seed / 2) % 2);
  const int layers = 1 + static_cast<int>((seed / 4) % 2);
  CircuitStep step(nd, na, layers, seed % 3 == 0 ? AncillaKind::kHaarFirst : AncillaKind::kAllZero);
  step.set_params(init_params(InitKind::kNormal, nd, na, layers, rng));
  std::vector<DensityMatrix> in;
  std::vector<DensityMatrix> tg;
  for (int i = 0; i < 3; ++i) {
    in.push_back(depolarize(testing::random_density(nd, rng), 0.2));
    tg.push_back(depolarize(testing::random_density(nd, rng), 0.1));
  }
  auto problem = make_step_problem(WeightedEnsemble::uniform(in), WeightedEnsemble::uniform(tg),
                                   step, loss, mode, rng.split(StreamTag::kTrain));
  return {std::move(step), std::move(problem)};
}

Verdict gradient_correctness() {
  Verdict v;
  RandomStream rng(1005);
  double worst_shift = 0.0;
  for (int k = 0; k < 5; ++k) {
    auto c = random_step(2000 + k, LossKind::kMmd, MeasurementMode::kEnumerate);
    const auto sigma = testing::random_density(c.step.num_data_qubits(), rng);
    CircuitStep moved = c.step;
    auto f = [&](std::span<const double> theta) {
      moved.set_params(theta);
      double acc = 0.0;
      for (const auto& m : step_output(moved, c.problem)) acc += m.weight * trace_product(m.state, sigma);
      return acc;
    };
    const auto fd = central_difference(f, c.step.params(), 1e-4);
    const auto shift = central_difference(f, c.step.params(), std::numbers::pi / 2);
    for (std::size_t p = 0; p < fd.size(); ++p) {
      worst_shift = std::max(worst_shift, std::abs(shift[p] * std::numbers::pi / 2 - fd[p]));
    }
  }
  v.check(worst_shift <= 1e-6, "parameter-shift identity (" + fmt(worst_shift) + ")");

  double worst_engines = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto loss = seed % 2 ? LossKind::kWasserstein : LossKind::kMmd;
    const auto c = random_step(3000 + seed, loss, MeasurementMode::kEnumerate);
    const auto fd = gradient(c.step, c.problem, {GradientKind::kCentralFd, 1e-4});
    const auto ps = gradient(c.step, c.problem, {GradientKind::kParamShift, 0});
    const auto ad = gradient(c.step, c.problem, {GradientKind::kAdjoint, 0});
    for (std::size_t p = 0; p < fd.size(); ++p) {
      worst_engines = std::max({worst_engines, std::abs(fd[p] - ps[p]), std::abs(ad[p] - ps[p])});
    }
  }
  v.check(worst_engines <= 1e-6, "engine agreement over 20 configs (" + fmt(worst_engines) + ")");

  const auto c = random_step(4000, LossKind::kMmd, MeasurementMode::kStochastic);
  const auto frozen = [&](std::span<const double>) { return step_loss(c.step, c.problem); };
  bool exact_zero = true;
  for (double g : central_difference(frozen, c.step.params(), 1e-4)) exact_zero = exact_zero && g == 0.0;
  v.check(exact_zero, "common-random-numbers zero gradient is exact");
  return v;
}

std::string seconds_since(std::chrono::steady_clock::time_point start) {
  return fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 3) + " s";
}

harness::MetricReport train_and_evaluate(const ExperimentConfig& c, Verdict& v,
                                         const std::string& label,
                                         std::vector<WeightedEnsemble>* trace_out = nullptr) {
  const auto start = std::chrono::steady_clock::now();
  const auto run = harness::run_training(c);
  auto trace = harness::generate_test_trace(run.result.pipeline, c);
  const auto data = harness::test_data(c);
  auto report = harness::evaluate(c.task.kind, trace.back(), WeightedEnsemble::uniform(data.states),
                                  c.histogram_bins);
  v.note(label + " trained in " + seconds_since(start));
  if (trace_out) *trace_out = std::move(trace);
  return report;
}

Verdict clustered_end_to_end() {
  Verdict v;
  for (const std::string name : {"table1_clustered_haar", "table1_clustered_zero"}) {
    const auto r = train_and_evaluate(config(name), v, name);
    v.check(r.fidelity_gen.mean >= 0.95, name + " F0_gen = " + fmt(r.fidelity_gen.mean));
    v.note(name + " F0_gen = " + fmt(r.fidelity_gen.mean, 5));
  }
  const auto big = gen_clustered(10000, RandomStream(1006));
  const auto f = mean_fidelity_to_zero(WeightedEnsemble::uniform(big.states));
  v.check(std::abs(f.mean - 0.985) <= 0.003, "F0_data = " + fmt(f.mean, 5));
  v.note("F0_data = " + fmt(f.mean, 5) + " +- " + fmt(f.standard_error, 2));
  return v;
}

// Spearman rank correlation of y against x.
double rank_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& a) {
    std::vector<std::size_t> idx(a.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return a[i] < a[j]; });
    std::vector<double> r(a.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

Verdict circular_end_to_end() {
  Verdict v;
  for (const std::string name : {"table1_circular_zero", "table1_circular_haar"}) {
    const auto c = config(name);
    std::vector<WeightedEnsemble> trace;
    const auto r = train_and_evaluate(c, v, name, &trace);
    v.check(r.wasserstein <= 0.05, name + " Wass_gen = " + fmt(r.wasserstein));
    v.note(name + " Wass_gen = " + fmt(r.wasserstein, 4));
    const auto curves = harness::backward_curves(trace, c);
    std::vector<double> t(curves.t.begin(), curves.t.end());
    const double purity_trend = rank_correlation(t, curves.purity_backward);
    const double wass_trend = rank_correlation(t, curves.wass_backward);
    v.check(purity_trend <= -0.8, name + " backward purity rises as t falls (rho = " +
                                      fmt(purity_trend, 3) + ")");
    v.check(wass_trend >= 0.8, name + " backward Wasserstein falls with t (rho = " +
                                   fmt(wass_trend, 3) + ")");
  }
  const auto baseline = harness::wasserstein_data_baseline(config("table1_circular_zero"), 10);
  v.check(std::abs(baseline.mean - 0.0063) <= 0.004, "Wass_data = " + fmt(baseline.mean));
  v.note("Wass_data = " + fmt(baseline.mean, 3) + " +- " + fmt(baseline.standard_error, 2));
  return v;
}

Verdict manybody_end_to_end() {
  Verdict v;
  std::map<std::string, harness::MetricReport> reports;
  for (const std::string tag : {"cos2", "cosine", "linear"}) {
    const std::string name = "table1_manybody_" + tag;
    reports[tag] = train_and_evaluate(config(name), v, name);
    v.note(tag + " Mx_gen = " + fmt(reports[tag].mx_gen.mean, 4) + " +- " +
           fmt(reports[tag].mx_gen.standard_error, 2));
  }
  const double cos2 = reports["cos2"].mx_gen.mean;
  const double cos = reports["cosine"].mx_gen.mean;
  const double lin = reports["linear"].mx_gen.mean;
  v.check(cos2 >= 0.85, "cos^2 Mx_gen >= 0.85");
  v.check(cos2 - lin >= 0.3, "cos^2 - linear = " + fmt(cos2 - lin, 3) + " >= 0.3");
  v.check(cos2 > cos, "cos^2 > cosine");

  const auto& h = reports["cos2"].histogram_gen;
  double above = 0.0;
  for (std::size_t b = 0; b < h.mass.size(); ++b) {
    if (h.bin_center(b) > 0.8) above += h.mass[b];
  }
  v.check(above >= 0.5, "generated Mx mass above 0.8 = " + fmt(above, 3));

  const auto c = config("table1_manybody_cos2");
  const auto data = harness::test_data(c);
  const auto traj = forward_trajectory(data.states, c.noise_schedule());
  const auto hf = mx_histogram(WeightedEnsemble::uniform(traj.at(c.steps)), c.histogram_bins);
  double near_zero = 0.0;
  for (std::size_t b = 0; b < hf.mass.size(); ++b) {
    if (std::abs(hf.bin_center(b)) < 0.05) near_zero += hf.mass[b];
  }
  v.check(near_zero >= 0.9, "forward t=T Mx mass near 0 = " + fmt(near_zero, 3));
  return v;
}

Verdict parameter_accounting() {
  Verdict v;
  const auto proposed = config("fig5_proposed");
  const auto benchmark = config("fig5_benchmark");
  const auto count = [](const ExperimentConfig& c) {
    return parameter_count(c.task.n_qubits, c.n_anc, c.layers, c.steps);
  };
  v.check(parameter_count(4, 2, 12, 6) == 864, "n=4 n_a=2 L=12 T=6 gives 864");
  v.check(parameter_count(4, 6, 21, 2) == 840, "n=4 n_a=6 L=21 T=2 gives 840");
  v.check(count(proposed) == 864, "proposed config has 864");
  v.check(count(benchmark) == 840, "benchmark config has 840");
  return v;
}

Verdict fig5_comparison() {
  Verdict v;
  std::map<std::string, double> final_mmd;
  for (const std::string name : {"fig5_proposed", "fig5_benchmark"}) {
    const auto start = std::chrono::steady_clock::now();
    const auto run = harness::run_training(config(name));
    final_mmd[name] = run.mmd_to_data.back().back();
    v.note(name + " final MMD = " + fmt(final_mmd[name], 4) + " (" + seconds_since(start) + ")");
  }
  v.check(final_mmd["fig5_proposed"] <= 0.05, "proposed final MMD <= 0.05");
  v.check(final_mmd["fig5_benchmark"] >= 0.5, "benchmark final MMD >= 0.5");
  return v;
}

}  // namespace
}  // namespace qdiffuse

int main(int argc, char** argv) {
  using namespace qdiffuse;
  CLI::App app{"Acceptance criteria"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "Criterion numbers to run (default: all)")
      ->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"algebraic invariants", algebraic_invariants},
      {"transport solver oracles", transport_oracles},
      {"forward closed form", forward_closed_form},
      {"p-SWAP equivalence", pswap_equivalence},
      {"gradient correctness", gradient_correctness},
      {"clustered states end to end", clustered_end_to_end},
      {"circular states end to end", circular_end_to_end},
      {"many-body end to end", manybody_end_to_end},
      {"parameter accounting", parameter_accounting},
      {"step/ancilla comparison (n_train = 50)", fig5_comparison},
  };
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  }
  bool all = true;
  for (int i : selected) {
    const auto& [name, run] = criteria[static_cast<std::size_t>(i - 1)];
    bool ok = false;
    std::string detail;
    try {
      const Verdict v = run();
      ok = v.passed();
      detail = v.summary();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << "criterion " << i << " [" << name << "]: " << (ok ? "PASS" : "FAIL") << " ("
              << detail << ")" << std::endl;
    all = all && ok;
  }
  return all ? 0 : 1;
}
