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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcs/clipping.hpp"
#include "pcs/ofdm.hpp"

namespace pcs::validation {

/// Exact Euclidean projection onto {1^T p = 1, 0 <= p <= 1, a^T p <= P} by a
/// primal active-set method. Independent of the nested bisection; used as
/// the reference solution.
std::vector<double> reference_projection(std::span<const double> q, std::span<const double> a,
                                         double power);

struct BussgangCase {
  double alpha = 0.0;
  double beta = 0.0;
  double r_analytic = 0.0;
  double r_empirical = 0.0;
  double var_analytic = 0.0;         // normalized by sigma_x^2
  double var_empirical = 0.0;        // normalized by sigma_x^2
  double var_unnormalized_phi = 0.0; // same formula with phi = exp(-t^2/2)/(2 pi)
  bool passed = false;
};

struct BussgangSuite {
  std::vector<BussgangCase> cases;
  double gain_tolerance = 0.01;      // relative
  double variance_tolerance = 0.02;  // |var_hat - var| / sigma_x^2
  long long samples = 0;
  bool passed = false;
  /// True when the unnormalized phi would miss the variance tolerance somewhere.
  bool unnormalized_phi_rejected = false;
};

BussgangSuite run_bussgang_suite(long long samples, std::uint64_t seed, int grid = 5);

struct CapacityCase {
  std::string kind;
  int order = 0;
  double eb_n0_db = 0.0;
  double quadrature_bits = 0.0;
  double monte_carlo_bits = 0.0;
  double monte_carlo_std_error = 0.0;
  bool passed = false;
};

struct CapacitySuite {
  std::vector<CapacityCase> cases;
  double tolerance = 0.02;
  long long samples = 0;
  bool passed = false;
};

CapacitySuite run_capacity_suite(int instances, long long samples, std::uint64_t seed,
                                 const OfdmConfig& cfg, const SystemParams& sp, int nodes);

struct ProjectionSuite {
  int instances = 0;
  double max_inf_error = 0.0;
  double max_constraint_violation = 0.0;
  double error_tolerance = 1e-4;
  double constraint_tolerance = 1e-3;
  int failures = 0;
  bool passed = false;
};

ProjectionSuite run_projection_suite(int instances, std::uint64_t seed);

}  // namespace pcs::validation
