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
#include "pcs/clipping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pcs/error.hpp"

namespace pcs {

void SystemParams::validate() const {
  require(!std::isnan(i_min) && !std::isnan(i_max) && std::isfinite(i_dc), "currents must be numbers");
  require(i_min < i_dc && i_dc < i_max, "currents must satisfy i_min < i_dc < i_max (got " +
                                            std::to_string(i_min) + ", " + std::to_string(i_dc) + ", " +
                                            std::to_string(i_max) + ")");
  require(eta > 0.0 && std::isfinite(eta), "eta must be positive");
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be positive");
  require(h_gain > 0.0 && std::isfinite(h_gain), "h_gain must be positive");
  require(bandwidth > 0.0 && std::isfinite(bandwidth), "bandwidth must be positive");
  require(n0 > 0.0 && std::isfinite(n0), "n0 must be positive");
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_pdf(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); }

double signal_variance(const Constellation& c, std::span<const double> p, const OfdmConfig& cfg) {
  cfg.validate();
  return (1.0 - 2.0 / cfg.n_subcarriers) * average_symbol_power(c, p);
}

double signal_variance(const Constellation& c, const SymbolDistribution& p, const OfdmConfig& cfg) {
  return signal_variance(c, p.probs(), cfg);
}

TimeFrame clip_signal(const TimeFrame& t, const SystemParams& sp) {
  const double lo = sp.i_min - sp.i_dc;
  const double hi = sp.i_max - sp.i_dc;
  std::vector<double> out(t.samples().begin(), t.samples().end());
  for (auto& v : out) v = std::clamp(v, lo, hi);
  return TimeFrame(std::move(out));
}

double attenuation_factor(double alpha, double beta) {
  require(alpha < beta, "attenuation_factor requires alpha < beta");
  return q_function(alpha) - q_function(beta);
}

namespace {

// t * phi(t) and t^2 * tail with the infinite limits taken explicitly.
double t_phi(double t) { return std::isinf(t) ? 0.0 : t * normal_pdf(t); }
double t2_times(double t, double tail) { return tail == 0.0 ? 0.0 : t * t * tail; }
double t_times(double t, double tail) { return tail == 0.0 ? 0.0 : t * tail; }

}  // namespace

double clipping_noise_variance(double sigma_x, double alpha, double beta) {
  require(sigma_x > 0.0, "clipping_noise_variance requires sigma_x > 0");
  require(alpha < beta, "clipping_noise_variance requires alpha < beta");
  const double r = attenuation_factor(alpha, beta);
  const double below = q_function(-alpha);  // P(x < alpha) = 1 - Q(alpha)
  const double above = q_function(beta);    // P(x > beta)
  const double second_moment = r + t_phi(alpha) - t_phi(beta) + t2_times(alpha, below) + t2_times(beta, above);
  const double mean = normal_pdf(alpha) - normal_pdf(beta) + t_times(alpha, below) + t_times(beta, above);
  const double normalized = second_moment - mean * mean - r * r;
  return sigma_x * sigma_x * std::max(0.0, normalized);
}

ClipStats clip_stats_from_variance(double sigma_x2, const SystemParams& sp) {
  sp.validate();
  require(sigma_x2 >= 0.0 && std::isfinite(sigma_x2), "signal variance must be finite and >= 0");
  ClipStats s;
  s.sigma_x = std::sqrt(sigma_x2);
  if (s.sigma_x == 0.0) {
    s.alpha = -std::numeric_limits<double>::infinity();
    s.beta = std::numeric_limits<double>::infinity();
    s.r_factor = 1.0;
    s.clip_noise_var = 0.0;
    return s;
  }
  s.alpha = (sp.i_min - sp.i_dc) / s.sigma_x;
  s.beta = (sp.i_max - sp.i_dc) / s.sigma_x;
  s.r_factor = attenuation_factor(s.alpha, s.beta);
  s.clip_noise_var = clipping_noise_variance(s.sigma_x, s.alpha, s.beta);
  return s;
}

ClipStats clip_stats(const Constellation& c, std::span<const double> p, const OfdmConfig& cfg,
                     const SystemParams& sp) {
  return clip_stats_from_variance(signal_variance(c, p, cfg), sp);
}

ClipStats clip_stats(const Constellation& c, const SymbolDistribution& p, const OfdmConfig& cfg,
                     const SystemParams& sp) {
  return clip_stats(c, p.probs(), cfg, sp);
}

}  // namespace pcs
