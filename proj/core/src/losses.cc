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

#include "qdiffuse/losses.h"

#include <algorithm>
#include <cmath>

#include "qdiffuse/errors.h"

namespace qdiffuse {
namespace {

void require_same_dim(const WeightedEnsemble& a, const WeightedEnsemble& b,
                      const char* what) {
  if (a.empty() || b.empty()) {
    throw InvalidArgument(std::string(what) + ": empty ensemble");
  }
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch");
  }
}

// Column k holds member k as a real vector [Re vec(rho); Im vec(rho)], so
// that Tr(rho sigma) is a dot product of columns for Hermitian operands.
Eigen::MatrixXd flatten(const WeightedEnsemble& e) {
  const Eigen::Index dd = e.dim() * e.dim();
  Eigen::MatrixXd out(2 * dd, static_cast<Eigen::Index>(e.size()));
  for (std::size_t k = 0; k < e.size(); ++k) {
    const Matrix& m = e[k].state.matrix();
    const auto col = static_cast<Eigen::Index>(k);
    out.col(col).head(dd) = Eigen::Map<const Eigen::VectorXcd>(m.data(), dd).real();
    out.col(col).tail(dd) = Eigen::Map<const Eigen::VectorXcd>(m.data(), dd).imag();
  }
  return out;
}

Matrix unflatten(const Eigen::VectorXd& v, Eigen::Index dim) {
  const Eigen::Index dd = dim * dim;
  Matrix m(dim, dim);
  Eigen::Map<Eigen::VectorXcd> flat(m.data(), dd);
  flat.real() = v.head(dd);
  flat.imag() = v.tail(dd);
  return m;
}

Eigen::VectorXd defect_roots(const WeightedEnsemble& e) {
  Eigen::VectorXd f(static_cast<Eigen::Index>(e.size()));
  for (std::size_t k = 0; k < e.size(); ++k) {
    f(static_cast<Eigen::Index>(k)) = purity_defect_root(purity(e[k].state));
  }
  return f;
}

double guarded_root(double purity_value) {
  return std::sqrt(std::max(kDefectFloor, 1.0 - purity_value));
}

}  // namespace

SuperfidelityFeatures superfidelity_features(const WeightedEnsemble& ensemble) {
  if (ensemble.empty()) throw InvalidArgument("superfidelity_features: empty ensemble");
  SuperfidelityFeatures f;
  f.mean_state = Matrix::Zero(ensemble.dim(), ensemble.dim());
  for (const auto& m : ensemble) {
    f.mean_state += m.weight * m.state.matrix();
    f.mean_defect_root += m.weight * purity_defect_root(purity(m.state));
  }
  return f;
}

double mean_superfidelity(const WeightedEnsemble& a, const WeightedEnsemble& b) {
  require_same_dim(a, b, "mean_superfidelity");
  const auto fa = superfidelity_features(a);
  const auto fb = superfidelity_features(b);
  return trace_product(fa.mean_state, fb.mean_state) +
         fa.mean_defect_root * fb.mean_defect_root;
}

double mean_superfidelity_unbiased(const WeightedEnsemble& a) {
  if (a.size() < 2) {
    throw InvalidArgument("mean_superfidelity_unbiased: need at least two members");
  }
  double diagonal = 0.0;
  double w2 = 0.0;
  for (const auto& m : a) {
    diagonal += m.weight * m.weight * superfidelity(m.state, m.state);
    w2 += m.weight * m.weight;
  }
  if (!(1.0 - w2 > 0.0)) {
    throw InvalidArgument("mean_superfidelity_unbiased: all weight on one member");
  }
  return (mean_superfidelity(a, a) - diagonal) / (1.0 - w2);
}

double mmd_distance(const WeightedEnsemble& a, const WeightedEnsemble& b,
                    MeanEstimator estimator) {
  require_same_dim(a, b, "mmd_distance");
  if (estimator == MeanEstimator::kUnbiased) {
    return mean_superfidelity_unbiased(a) + mean_superfidelity_unbiased(b) -
           2.0 * mean_superfidelity(a, b);
  }
  return mean_superfidelity(a, a) + mean_superfidelity(b, b) -
         2.0 * mean_superfidelity(a, b);
}

Eigen::MatrixXd cost_matrix(const WeightedEnsemble& a, const WeightedEnsemble& b) {
  require_same_dim(a, b, "cost_matrix");
  const Eigen::MatrixXd fa = flatten(a);
  const Eigen::MatrixXd fb = flatten(b);
  const Eigen::VectorXd ra = defect_roots(a);
  const Eigen::VectorXd rb = defect_roots(b);
  Eigen::MatrixXd g = fa.transpose() * fb;
  g.noalias() += ra * rb.transpose();
  return (1.0 - g.array()).cwiseMax(0.0).matrix();
}

TransportPlan wasserstein_plan(const WeightedEnsemble& a, const WeightedEnsemble& b) {
  const Eigen::MatrixXd c = cost_matrix(a, b);
  const auto wa = a.weights();
  const auto wb = b.weights();
  return solve_transport(c, wa, wb);
}

double wasserstein(const WeightedEnsemble& a, const WeightedEnsemble& b) {
  return wasserstein_plan(a, b).value;
}

LossGradient mmd_gradient(const WeightedEnsemble& model,
                          const WeightedEnsemble& target, MeanEstimator estimator) {
  require_same_dim(model, target, "mmd_gradient");
  const auto fm = superfidelity_features(model);
  const auto ft = superfidelity_features(target);
  const Matrix diff = fm.mean_state - ft.mean_state;
  const double defect_diff = fm.mean_defect_root - ft.mean_defect_root;

  LossGradient g;
  g.state.reserve(model.size());
  g.weight.reserve(model.size());
  if (estimator == MeanEstimator::kBiased) {
    g.value = diff.squaredNorm() + defect_diff * defect_diff;
    for (const auto& m : model) {
      const double p = purity(m.state);
      // d f = -Tr(rho d rho) / f
      Matrix s = 2.0 * m.weight * diff;
      s -= (2.0 * defect_diff * m.weight / guarded_root(p)) * m.state.matrix();
      g.state.push_back(std::move(s));
      g.weight.push_back(2.0 * trace_product(m.state.matrix(), diff) +
                         2.0 * defect_diff * purity_defect_root(p));
    }
    return g;
  }

  // L = (Gmm - S) / (1 - S) + Gu(target) - 2 Gmt with S = sum_i w_i^2.
  double s_model = 0.0;
  for (const auto& m : model) s_model += m.weight * m.weight;
  if (!(1.0 - s_model > 0.0)) {
    throw InvalidArgument("mmd_gradient: unbiased estimator needs spread weights");
  }
  const double inv = 1.0 / (1.0 - s_model);
  const double gmm = trace_product(fm.mean_state, fm.mean_state) +
                     fm.mean_defect_root * fm.mean_defect_root;
  const double gmt = trace_product(fm.mean_state, ft.mean_state) +
                     fm.mean_defect_root * ft.mean_defect_root;
  g.value = (gmm - s_model) * inv + mean_superfidelity_unbiased(target) - 2.0 * gmt;
  for (const auto& m : model) {
    const double p = purity(m.state);
    const double f = purity_defect_root(p);
    // Partials of Gmm and Gmt with respect to w_i and rho_i.
    const double dgmm_dw = 2.0 * (trace_product(m.state.matrix(), fm.mean_state) +
                                  f * fm.mean_defect_root);
    const double dgmt_dw =
        trace_product(m.state.matrix(), ft.mean_state) + f * ft.mean_defect_root;
    Matrix s = 2.0 * m.weight * inv * fm.mean_state - 2.0 * m.weight * ft.mean_state;
    const double droot = m.weight / guarded_root(p);
    s -= (2.0 * inv * fm.mean_defect_root - 2.0 * ft.mean_defect_root) * droot *
         m.state.matrix();
    g.state.push_back(std::move(s));
    g.weight.push_back((dgmm_dw - 2.0 * m.weight) * inv +
                       (gmm - s_model) * 2.0 * m.weight * inv * inv - 2.0 * dgmt_dw);
  }
  return g;
}

LossGradient wasserstein_gradient(const WeightedEnsemble& model,
                                  const WeightedEnsemble& target) {
  require_same_dim(model, target, "wasserstein_gradient");
  const Eigen::MatrixXd fm = flatten(model);
  const Eigen::MatrixXd ft = flatten(target);
  const Eigen::VectorXd rm = defect_roots(model);
  const Eigen::VectorXd rt = defect_roots(target);
  Eigen::MatrixXd g = fm.transpose() * ft;
  g.noalias() += rm * rt.transpose();
  const Eigen::MatrixXd cost = (1.0 - g.array()).cwiseMax(0.0).matrix();

  const auto wm = model.weights();
  const auto wt = target.weights();
  const TransportPlan plan = solve_transport(cost, wm, wt);

  // Plan restricted to pairs where the clamp is inactive.
  const Eigen::MatrixXd active =
      (g.array() < 1.0).select(plan.plan.array(), 0.0).matrix();
  const Eigen::MatrixXd pulled = ft * active.transpose();  // sum_j P_ij sigma_j
  const Eigen::VectorXd pulled_roots = active * rt;        // sum_j P_ij f_j

  LossGradient out;
  out.value = plan.value;
  out.state.reserve(model.size());
  out.weight.reserve(model.size());
  const Eigen::Index dim = model.dim();
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double p = purity(model[i].state);
    Matrix s = -unflatten(pulled.col(k), dim);
    s += (pulled_roots(k) / guarded_root(p)) * model[i].state.matrix();
    out.state.push_back(std::move(s));
    out.weight.push_back(plan.row_potential(k));
  }
  return out;
}

}  // namespace qdiffuse
