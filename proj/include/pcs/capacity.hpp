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

#include <span>

#include "pcs/clipping.hpp"
#include "pcs/constellation.hpp"
#include "pcs/ofdm.hpp"

namespace pcs {

inline constexpr int kDefaultQuadratureNodes = 32;

/// Which power the Eb/N0 axis measures.
///
/// `received` uses the electrical power after the optical link,
/// rho^2 sigma_x^2 / (log2(M) (N-2)/N B N0). `transmitter` uses the drive
/// current variance directly, sigma_x^2 / (log2(M) (N-2)/N B N0).
enum class EbN0Reference { received, transmitter };

/// Per-subcarrier channel Y = G X + W with W ~ CN(0, total_noise_var).
struct SubchannelModel {
  double effective_gain = 1.0;
  double total_noise_var = 1.0;
  Constellation constellation;

  void validate() const;
};

/// G = rho R and total noise rho^2 sigma_clip^2 + sigma_z^2.
SubchannelModel make_subchannel(const Constellation& c, const ClipStats& stats,
                                const SystemParams& sp);

struct CapacityReport {
  double capacity_bits = 0.0;
  double h_y = 0.0;
  double h_noise = 0.0;
  double eb_n0_db = 0.0;
  double sndr = 0.0;
  int quadrature_nodes = kDefaultQuadratureNodes;
  ClipStats clip;
};

double mixture_pdf(double y_r, double y_i, std::span<const double> p, const SubchannelModel& m);

/// log2(pi e total_noise_var).
double noise_entropy(const SubchannelModel& m);

/// h(Y) in bits: -sum_m p_m E[log2 p(Y) | X_m], each expectation by a
/// nodes x nodes Gauss-Hermite rule centered on the component mean. Weights
/// below 1e-15 are skipped; densities are floored at 1e-300.
double output_entropy(std::span<const double> p, const SubchannelModel& m,
                      int nodes = kDefaultQuadratureNodes);

/// C(p) = h(Y) - h(noise). Everything clip-related is recomputed from p.
/// Weights need not lie on the simplex so finite differences can step off it.
CapacityReport capacity(std::span<const double> p, const Constellation& c, const OfdmConfig& cfg,
                        const SystemParams& sp, int nodes = kDefaultQuadratureNodes,
                        EbN0Reference ref = EbN0Reference::received);
CapacityReport capacity(const SymbolDistribution& p, const Constellation& c,
                        const OfdmConfig& cfg, const SystemParams& sp,
                        int nodes = kDefaultQuadratureNodes,
                        EbN0Reference ref = EbN0Reference::received);

double eb_n0_db(double sigma_x2, int order, const OfdmConfig& cfg, const SystemParams& sp,
                EbN0Reference ref = EbN0Reference::received);

/// Signal variance sigma_x^2 achieving the target Eb/N0.
double sigma_x2_for_eb_n0(double eb_n0_db, int order, const OfdmConfig& cfg,
                          const SystemParams& sp, EbN0Reference ref = EbN0Reference::received);

/// Symbol-power budget P = sigma_x^2 / (1 - 2/N) achieving the target Eb/N0.
double power_for_eb_n0(double eb_n0_db, int order, const OfdmConfig& cfg, const SystemParams& sp,
                       EbN0Reference ref = EbN0Reference::received);

const char* to_string(EbN0Reference ref);
EbN0Reference eb_n0_reference_from_string(const char* name);

}  // namespace pcs
