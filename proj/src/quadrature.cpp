/*
 * Copyright 2026 The pcs-shaper Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "pcs/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "pcs/error.hpp"

namespace pcs {
namespace {

// Eigenvalues of the Jacobi matrix seed the roots; a Newton polish on the
// orthonormal Hermite recurrence then gives nodes and weights to full precision.
GaussHermiteRule compute_rule(int n) {
  GaussHermiteRule rule;
  rule.nodes.assign(static_cast<std::size_t>(n), 0.0);
  rule.weights.assign(static_cast<std::size_t>(n), 0.0);
  if (n == 1) {
    rule.weights[0] = std::sqrt(std::numbers::pi);
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw_invalid("Gauss-Hermite eigenvalue solve failed for n = " + std::to_string(n));

  const double pim4 = std::pow(std::numbers::pi, -0.25);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Largest root first.
    double z = solver.eigenvalues()[n - 1 - i];
    double pp = 0.0;
    for (int iter = 0; iter < 8; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = z;
    rule.nodes[hi] = -z;
    rule.weights[lo] = 2.0 / (pp * pp);
    rule.weights[hi] = rule.weights[lo];
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int n) {
  require(n >= 1 && n <= 256, "Gauss-Hermite order must be in [1, 256]");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<const GaussHermiteRule>(compute_rule(n));
  return *slot;
}

}  // namespace pcs
