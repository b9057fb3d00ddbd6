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
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pcs/capacity.hpp"
#include "pcs/clipping.hpp"
#include "pcs/constellation.hpp"
#include "pcs/ofdm.hpp"

namespace pcs {

struct OptimizerConfig {
  int max_iters = 500;
  double step_size = 1e-4;
  double tolerance = 1e-3;
  double gradient_step = 1e-5;
  /// Average symbol-energy cap P, same units as the constellation energies.
  double power_budget = 1.0;
  double bisection_bound = 1e5;
  int bisection_max_iters = 500;
  /// Stopping tolerance of both bisection levels, on the sum and on a^T p / P.
  double projection_tolerance = 1e-10;
  int quadrature_nodes = kDefaultQuadratureNodes;
  EbN0Reference eb_n0_reference = EbN0Reference::received;

  void validate() const;
};

using Functional = std::function<double(std::span<const double>)>;

/// Central differences per coordinate. Coordinates within `step` of 0 or 1 use
/// the one-sided difference that stays inside [0, 1]. Evaluations run on the
/// worker pool.
std::vector<double> numerical_gradient(const Functional& f, std::span<const double> p,
                                       double step);

struct LambdaSolution {
  std::vector<double> p;
  double lambda = 0.0;
  int iterations = 0;
};

/// Inner level of the nested bisection: p(lambda) = clamp(q - lambda a - nu, 0, 1)
/// with lambda = 0 when the power cap is slack there, otherwise lambda chosen so
/// that a^T p(lambda) = P within cfg.projection_tolerance.
LambdaSolution solve_lambda(double nu, std::span<const double> q, std::span<const double> a,
                            double power, const OptimizerConfig& cfg);

struct ProjectionResult {
  std::vector<double> p;
  double lambda = 0.0;
  double nu = 0.0;
  int outer_iterations = 0;
  bool converged = false;
};

/// Euclidean projection of q onto {p : a^T p <= P, 1^T p = 1, 0 <= p <= 1}
/// by nested bisection (nu outer, lambda inner). Throws infeasible when
/// P < min_m a_m. If the outer loop stops on bracket collapse with
/// |1^T p - 1| above tolerance the last iterate is returned with
/// converged == false.
ProjectionResult project(std::span<const double> q, std::span<const double> a, double power,
                         const OptimizerConfig& cfg);
ProjectionResult project(std::span<const double> q, const Constellation& c, double power,
                         const OptimizerConfig& cfg);

struct IterationEvent {
  int iteration = 0;
  double capacity = 0.0;
  double step_norm = 0.0;
  double projection_seconds = 0.0;
};

using IterationObserver = std::function<void(const IterationEvent&)>;

struct OptimizerTrace {
  int iterations = 0;
  bool converged = false;
  /// capacities[0] is the start; capacities[k] follows iteration k.
  std::vector<double> capacities;
  /// step_norms[k-1] is ||p_k - p_{k-1}|| / ||p_{k-1}||.
  std::vector<double> step_norms;
  std::vector<double> projection_seconds;
  std::vector<std::vector<double>> iterates;
  /// Best iterate visited (the last one unless a fixed step overshot).
  SymbolDistribution final_distribution = SymbolDistribution::uniform(2);
  double final_capacity = 0.0;
};

/// True when p satisfies the sum, box and power constraints within tol
/// (power relative to P).
bool is_feasible(std::span<const double> p, std::span<const double> a, double power,
                 double tol);

/// Projected gradient ascent on C(p) with fixed step and relative-step stop.
OptimizerTrace optimize(const Constellation& c, const OfdmConfig& ofdm, const SystemParams& sp,
                        const OptimizerConfig& opt, const SymbolDistribution& start,
                        const IterationObserver& observer = {});

}  // namespace pcs
