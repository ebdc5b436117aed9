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

// Reference solvers that share no code with the library: brute-force
// minimizers for tiny linear SVMs and an exhaustive ECOC scorer.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct SvmSolution {
  Eigen::Vector2d w = Eigen::Vector2d::Zero();
  double b = 0.0;
  double objective = std::numeric_limits<double>::infinity();
};

/// 1/2 |w|^2 + C sum max(0, 1 - y (w.x + b)) for 2-D points.
inline double primal(const std::vector<Eigen::Vector2d>& x, const std::vector<int>& y, const Eigen::Vector2d& w,
                     double b, double C) {
  double hinge = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) hinge += std::max(0.0, 1.0 - y[i] * (w.dot(x[i]) + b));
  return 0.5 * w.squaredNorm() + C * hinge;
}

/// For fixed w the objective is piecewise linear and convex in b, so its
/// minimum sits on one of the hinge breakpoints b = y_i - w.x_i.
inline std::pair<double, double> best_bias(const std::vector<Eigen::Vector2d>& x, const std::vector<int>& y,
                                           const Eigen::Vector2d& w, double C) {
  double best_b = 0.0, best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double b = y[i] - w.dot(x[i]);
    const double v = primal(x, y, w, b, C);
    if (v < best) {
      best = v;
      best_b = b;
    }
  }
  return {best, best_b};
}

/// Exhaustive search over active sets. Each point is either violating the
/// margin (multiplier C), exactly on it, or inactive; every assignment gives
/// a small linear KKT system whose w is scored with the exact best bias.
/// The assignment matching the optimum reproduces it, and every candidate
/// is a real objective value, so the minimum over all 3^n assignments is
/// the optimum.
inline SvmSolution brute_force_svm(const std::vector<Eigen::Vector2d>& x, const std::vector<int>& y, double C) {
  const std::size_t n = x.size();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= 3;
  SvmSolution best;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<int> role(n);  // 0 inactive, 1 on the margin, 2 violating
    std::vector<std::size_t> on;
    for (std::size_t i = 0, c = code; i < n; ++i, c /= 3) {
      role[i] = static_cast<int>(c % 3);
      if (role[i] == 1) on.push_back(i);
    }
    // Unknowns: w (2), b, one multiplier per margin point.
    const auto m = static_cast<Eigen::Index>(3 + on.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    // w - sum_on lambda_i y_i x_i = C sum_viol y_i x_i
    A(0, 0) = A(1, 1) = 1.0;
    // sum_on lambda_i y_i = -C sum_viol y_i
    for (std::size_t i = 0; i < n; ++i) {
      if (role[i] != 2) continue;
      rhs.head<2>() += C * y[i] * x[i];
      rhs[2] -= C * y[i];
    }
    for (std::size_t k = 0; k < on.size(); ++k) {
      const auto i = on[k];
      const auto col = static_cast<Eigen::Index>(3 + k);
      A(0, col) = -y[i] * x[i].x();
      A(1, col) = -y[i] * x[i].y();
      A(2, col) = y[i];
      // y_i (w.x_i + b) = 1
      A(col, 0) = y[i] * x[i].x();
      A(col, 1) = y[i] * x[i].y();
      A(col, 2) = y[i];
      rhs[col] = 1.0;
    }
    if (on.empty()) A(2, 2) = 1.0;  // b is free; the exact bias search fixes it
    const Eigen::VectorXd sol = A.fullPivLu().solve(rhs);
    if (!sol.allFinite()) continue;
    const Eigen::Vector2d w = sol.head<2>();
    const auto [value, b] = best_bias(x, y, w, C);
    if (value < best.objective) best = {w, b, value};
  }
  return best;
}

/// Smallest objective on a (2k+1)^3 grid of half-width h around (w, b),
/// refined by halving h until it drops below `floor`.
inline double refined_grid_minimum(const std::vector<Eigen::Vector2d>& x, const std::vector<int>& y, double C,
                                   Eigen::Vector2d w, double b, double h = 0.5, double floor = 1e-7) {
  constexpr int k = 6;
  double best = primal(x, y, w, b, C);
  for (; h > floor; h *= 0.5) {
    const double step = h / k;
    Eigen::Vector2d best_w = w;
    double best_b = b;
    for (int i = -k; i <= k; ++i) {
      for (int j = -k; j <= k; ++j) {
        for (int l = -k; l <= k; ++l) {
          const Eigen::Vector2d cw = w + step * Eigen::Vector2d(i, j);
          const double cb = b + step * l;
          const double v = primal(x, y, cw, cb, C);
          if (v < best) {
            best = v;
            best_w = cw;
            best_b = cb;
          }
        }
      }
    }
    w = best_w;
    b = best_b;
  }
  return best;
}

struct Decision {
  std::size_t label = 0;
  std::vector<double> losses;
};

/// Scores every class against the pairwise code written out directly:
/// machine s = (i, j) in lexicographic order, +1 for i, -1 for j.
inline Decision enumerate_decode(const std::vector<double>& f, std::size_t k) {
  std::vector<double> loss(k, 0.0), agree(k, 0.0);
  std::size_t s = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j, ++s) {
      loss[i] += std::max(0.0, 1.0 - f[s]);
      agree[i] += f[s];
      loss[j] += std::max(0.0, 1.0 + f[s]);
      agree[j] -= f[s];
    }
  }
  // Every class is a candidate; keep those that survive each rule in turn.
  std::vector<std::size_t> candidates(k);
  for (std::size_t c = 0; c < k; ++c) candidates[c] = c;
  const double min_loss = *std::min_element(loss.begin(), loss.end());
  std::erase_if(candidates, [&](std::size_t c) { return loss[c] != min_loss; });
  double max_agree = -std::numeric_limits<double>::infinity();
  for (auto c : candidates) max_agree = std::max(max_agree, agree[c]);
  std::erase_if(candidates, [&](std::size_t c) { return agree[c] != max_agree; });
  return {*std::min_element(candidates.begin(), candidates.end()), loss};
}

/// Plain vote count over the pairwise machines, lowest index on ties.
inline std::size_t majority_vote(const std::vector<double>& f, std::size_t k) {
  std::vector<int> votes(k, 0);
  std::size_t s = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j, ++s) ++votes[f[s] > 0 ? i : j];
  }
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

}  // namespace oracle
