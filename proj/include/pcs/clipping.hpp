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

#include "pcs/constellation.hpp"
#include "pcs/ofdm.hpp"

namespace pcs {

/// Link constants. Currents in mA, bandwidth in Hz, noise PSD in mA^2/Hz.
struct SystemParams {
  double i_min = 100.0;
  double i_max = 1000.0;
  double i_dc = 500.0;
  double eta = 0.44;     // W/A
  double gamma = 0.54;   // A/W
  double h_gain = 3e-6;
  double bandwidth = 20e6;
  double n0 = 1e-16;

  /// eta * gamma * h.
  double rho() const { return eta * gamma * h_gain; }
  /// Receiver noise variance B * N0 (mA^2).
  double noise_var() const { return bandwidth * n0; }

  void validate() const;
};

/// Clipping quantities derived from the signal RMS. alpha/beta are the clip
/// levels in units of sigma_x relative to the bias point.
struct ClipStats {
  double sigma_x = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double r_factor = 1.0;
  double clip_noise_var = 0.0;
};

/// Upper-tail probability of the standard normal.
double q_function(double x);

/// Standard normal density.
double normal_pdf(double t);

/// sigma_x^2 = (1 - 2/N) sum_m p_m |X_m|^2. Accepts unnormalized weights.
double signal_variance(const Constellation& c, std::span<const double> p, const OfdmConfig& cfg);
double signal_variance(const Constellation& c, const SymbolDistribution& p, const OfdmConfig& cfg);

/// Digital clipping in the zero-mean (pre-bias) domain: samples are limited to
/// [i_min - i_dc, i_max - i_dc], i.e. [alpha sigma_x, beta sigma_x].
TimeFrame clip_signal(const TimeFrame& t, const SystemParams& sp);

/// Bussgang gain R = Q(alpha) - Q(beta).
double attenuation_factor(double alpha, double beta);

/// Variance of the clipping distortion after removing the Bussgang-scaled
/// input and the output mean:
///
///   sigma_x^2 [ R + a phi(a) - b phi(b) + a^2 (1 - Q(a)) + b^2 Q(b)
///               - (phi(a) - phi(b) + (1 - Q(a)) a + Q(b) b)^2 - R^2 ]
///
/// with phi the standard normal density.
double clipping_noise_variance(double sigma_x, double alpha, double beta);

ClipStats clip_stats_from_variance(double sigma_x2, const SystemParams& sp);
ClipStats clip_stats(const Constellation& c, std::span<const double> p, const OfdmConfig& cfg,
                     const SystemParams& sp);
ClipStats clip_stats(const Constellation& c, const SymbolDistribution& p, const OfdmConfig& cfg,
                     const SystemParams& sp);

}  // namespace pcs
