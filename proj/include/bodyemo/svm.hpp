// Copyright 2026 The bodyemo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Soft-margin linear SVM with an unregularized bias:
//
//   min_{w,b}  1/2 |w|^2 + C sum_i max(0, 1 - y_i (w.x_i + b))
//
// solved in the dual
//
//   min_a  1/2 a'Qa - e'a   s.t.  0 <= a_i <= C,  y'a = 0,   Q_ij = y_i y_j x_i.x_j
//
// by sequential minimal optimization with second-order working-set
// selection. Iteration stops once the maximal KKT violation
// max_{I_up} -y G - min_{I_low} -y G drops below `tol`; that bound and the
// primal/dual gap are reported with the result.

#include <bodyemo/skeleton.hpp>

#include <Eigen/Dense>

#include <limits>
#include <span>

namespace bodyemo {

struct SvmOptions {
  double C = 1.0;
  double tol = 1e-4;
  std::size_t max_iterations = 0;  // 0: max(10^7, 100 n)
  bool record_trace = false;
};

struct BinarySvm {
  Eigen::VectorXd w;
  double b = 0.0;
  double C = 1.0;
  std::size_t iterations = 0;
  double objective = 0.0;       // primal objective at (w, b)
  double dual_objective = 0.0;  // -(1/2 a'Qa - e'a), a lower bound on the primal optimum
  double kkt_violation = 0.0;
  bool converged = false;
  std::vector<double> objective_trace;  // dual objective (minimization form) per iteration

  double decision(const Eigen::Ref<const Eigen::VectorXd>& x) const { return w.dot(x) + b; }

  double relative_duality_gap() const {
    return (objective - dual_objective) / std::max(1.0, std::abs(objective));
  }
};

/// Primal objective of (w, b) on a dataset, rows of X are examples.
inline double svm_primal_objective(const Eigen::MatrixXd& X, std::span<const int> y,
                                   const Eigen::VectorXd& w, double b, double C) {
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double m = y[static_cast<std::size_t>(i)] * (X.row(i).dot(w) + b);
    hinge += std::max(0.0, 1.0 - m);
  }
  return 0.5 * w.squaredNorm() + C * hinge;
}

inline BinarySvm train_binary(const Eigen::MatrixXd& X, std::span<const int> y,
                              const SvmOptions& opt = {}) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (y.size() != n) throw DimensionMismatch("label count does not match example count");
  if (!(opt.C > 0.0) || !(opt.tol > 0.0)) throw InvalidArgument("C and tol must be positive");
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v == 1) has_pos = true;
    else if (v == -1) has_neg = true;
    else throw InvalidArgument("labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) throw SingleClassInput("training data needs both +1 and -1 examples");
  if (!X.allFinite()) throw NonFinite("training matrix contains NaN or Inf");

  const Eigen::MatrixXd K = X * X.transpose();
  const double C = opt.C;
  const std::size_t max_iter =
      opt.max_iterations ? opt.max_iterations : std::max<std::size_t>(10'000'000, 100 * n);
  constexpr double kTau = 1e-12;

  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);
  const auto yd = [&](std::size_t t) { return static_cast<double>(y[t]); };
  const auto in_up = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0.0);
  };
  const auto in_low = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < C);
  };
  const auto dual = [&] {
    double d = 0.0;
    for (std::size_t t = 0; t < n; ++t) d += alpha[t] * (G[t] - 1.0);
    return 0.5 * d;
  };

  BinarySvm model;
  model.C = C;
  std::size_t iter = 0;
  double violation = std::numeric_limits<double>::infinity();
  if (opt.record_trace) model.objective_trace.push_back(0.0);

  while (iter < max_iter) {
    // Working set: i maximizes -y G over I_up, j minimizes the second-order
    // decrease estimate over violating members of I_low.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t) && -yd(t) * G[t] > gmax) {
        gmax = -yd(t) * G[t];
        i = t;
      }
    }
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t j = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      gmax2 = std::max(gmax2, yd(t) * G[t]);
      if (i == n) continue;
      const double grad_diff = gmax + yd(t) * G[t];
      if (grad_diff > 0.0) {
        double a = K(i, i) + K(t, t) - 2.0 * K(i, t);
        if (a <= 0.0) a = kTau;
        const double score = -(grad_diff * grad_diff) / a;
        if (score < best) {
          best = score;
          j = t;
        }
      }
    }
    violation = gmax + gmax2;
    if (i == n || j == n || violation < opt.tol) break;

    double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
    if (quad <= 0.0) quad = kTau;
    const double old_i = alpha[i], old_j = alpha[j];

    if (y[i] != y[j]) {
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
      }
      if (diff > 0.0) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
      } else {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
      }
    } else {
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
      } else {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
      }
      if (sum > C) {
        if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
      }
    }

    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      G[t] += yd(t) * (yd(i) * K(t, i) * di + yd(j) * K(t, j) * dj);
    }
    ++iter;
    if (opt.record_trace) model.objective_trace.push_back(dual());
  }

  // Bias from free multipliers, or the midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yG = yd(t) * G[t];
    if (alpha[t] >= C) {
      if (y[t] == -1) ub = std::min(ub, yG); else lb = std::max(lb, yG);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yG); else lb = std::max(lb, yG);
    } else {
      ++free_count;
      free_sum += yG;
    }
  }
  const double rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (ub + lb);

  Eigen::VectorXd coef(static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < n; ++t) coef[static_cast<Eigen::Index>(t)] = alpha[t] * yd(t);
  model.w = X.transpose() * coef;
  model.b = -rho;
  model.iterations = iter;
  model.kkt_violation = violation;
  model.converged = violation < opt.tol;
  model.objective = svm_primal_objective(X, y, model.w, model.b, C);
  model.dual_objective = -dual();
  return model;
}

/// Row-stacks equally sized vectors into an example matrix.
template <typename Range, typename Proj>
Eigen::MatrixXd stack_rows(const Range& rows, Proj&& values_of) {
  const auto n = static_cast<Eigen::Index>(std::size(rows));
  if (n == 0) return {};
  const auto d = static_cast<Eigen::Index>(std::size(values_of(*std::begin(rows))));
  Eigen::MatrixXd X(n, d);
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    const auto& v = values_of(row);
    if (static_cast<Eigen::Index>(std::size(v)) != d) {
      throw DimensionMismatch("rows have different lengths");
    }
    for (Eigen::Index c = 0; c < d; ++c) X(r, c) = v[static_cast<std::size_t>(c)];
    ++r;
  }
  return X;
}

}  // namespace bodyemo
