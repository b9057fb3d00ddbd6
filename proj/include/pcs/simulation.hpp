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

#include "pcs/capacity.hpp"
#include "pcs/clipping.hpp"
#include "pcs/constellation.hpp"
#include "pcs/ofdm.hpp"
#include "pcs/optimizer.hpp"

namespace pcs {

enum class PcsSource { uniform, random_pcs };
enum class CcdfAveraging { per_threshold, pooled };

struct CcdfCurve {
  std::vector<double> thresholds_db;
  std::vector<double> exceed_prob;
  long long n_frames = 0;
  int n_distributions = 0;
  std::string label;
};

/// PAPR CCDF estimate. `uniform` draws i.i.d. uniform symbols. `random_pcs`
/// averages over n_distributions flat-Dirichlet distributions, each with the
/// constellation rescaled to unit average energy under that distribution, and
/// n_frames frames per distribution. No cyclic prefix enters the PAPR.
CcdfCurve papr_ccdf(const Constellation& c, PcsSource source, const OfdmConfig& cfg,
                    long long n_frames, int n_distributions, std::span<const double> thresholds_db,
                    std::uint64_t seed, CcdfAveraging averaging = CcdfAveraging::per_threshold);

struct BussgangEstimate {
  double r_hat = 0.0;
  double var_hat = 0.0;
  /// Correlation coefficient between x and x_clip - R x with the analytic R.
  double residual_correlation = 0.0;
};

/// Clips N(0, sigma_x^2) samples at alpha sigma_x / beta sigma_x; returns the
/// least-squares gain and the variance of the (mean-removed) residual.
BussgangEstimate empirical_bussgang(double sigma_x, double alpha, double beta,
                                    long long n_samples, std::uint64_t seed);

struct MonteCarloEstimate {
  double bits = 0.0;
  double std_error = 0.0;
};

/// I(X;Y) by sampling X ~ p, Y = G X + W and averaging -log2 p(Y).
MonteCarloEstimate mc_mutual_information(std::span<const double> p, const SubchannelModel& model,
                                         long long n_samples, std::uint64_t seed);

struct SweepPoint {
  double eb_n0_db = 0.0;
  double power_budget = 0.0;
  double capacity_uniform = 0.0;
  double capacity_shaped = 0.0;
  SymbolDistribution distribution = SymbolDistribution::uniform(2);
  ClipStats clip_stats_uniform;
  ClipStats clip_stats;
  int iterations = 0;
  bool converged = false;
};

struct SweepOptions {
  /// Extra flat-Dirichlet starts; the best result (uniform start included) wins.
  int restarts = 0;
  std::uint64_t seed = 1;
};

/// For each Eb/N0: power budget from the inverse map, constellation scaled so
/// the uniform average energy equals the budget, uniform capacity and PGD
/// from the uniform start. `c` may have any scale.
std::vector<SweepPoint> capacity_sweep(const Constellation& c, const OfdmConfig& cfg,
                                       const SystemParams& sp, std::span<const double> eb_n0_grid,
                                       const OptimizerConfig& opt, const SweepOptions& options = {});

struct ConvergenceStudy {
  int order = 0;
  double eb_n0_db = 0.0;
  std::vector<int> iterations;           // per start
  std::vector<bool> converged;           // per start
  std::vector<double> mean_capacity;     // index = iteration, final values carried forward
  double mean_iterations = 0.0;
  double mean_projection_seconds = 0.0;  // wall clock; not reproducible
};

/// PGD from n_starts flat-Dirichlet starts (each projected onto the feasible set).
ConvergenceStudy convergence_study(const Constellation& c, const OfdmConfig& cfg,
                                   const SystemParams& sp, const OptimizerConfig& opt,
                                   double eb_n0_db, int n_starts, std::uint64_t seed);

/// Builds the scaled constellation and budget for an Eb/N0 operating point.
struct OperatingPoint {
  Constellation constellation;
  double power_budget = 0.0;
};
OperatingPoint operating_point(const Constellation& c, double eb_n0_db, const OfdmConfig& cfg,
                               const SystemParams& sp, EbN0Reference ref);

const char* to_string(PcsSource source);

}  // namespace pcs
