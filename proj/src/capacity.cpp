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
#include "pcs/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "pcs/error.hpp"
#include "pcs/quadrature.hpp"

namespace pcs {
namespace {

constexpr double kWeightFloor = 1e-15;
const double kLogDensityFloor = std::log(1e-300);

bool active(double w) { return w >= kWeightFloor; }

// Distinct values of a coordinate and, per symbol, the index of its value.
struct Levels {
  std::vector<double> values;
  std::vector<std::size_t> index;
};

Levels distinct_levels(const std::vector<double>& coords) {
  Levels lv;
  lv.index.resize(coords.size());
  for (std::size_t j = 0; j < coords.size(); ++j) {
    auto it = std::find(lv.values.begin(), lv.values.end(), coords[j]);
    if (it == lv.values.end()) {
      lv.values.push_back(coords[j]);
      it = lv.values.end() - 1;
    }
    lv.index[j] = static_cast<std::size_t>(it - lv.values.begin());
  }
  return lv;
}

// table[(u * L + v) * n + i] = exp(-(t_i + c_u - c_v)^2)
std::vector<double> gaussian_table(const Levels& lv, const GaussHermiteRule& rule) {
  const std::size_t levels = lv.values.size();
  const std::size_t n = rule.nodes.size();
  std::vector<double> table(levels * levels * n);
  for (std::size_t u = 0; u < levels; ++u)
    for (std::size_t v = 0; v < levels; ++v)
      for (std::size_t i = 0; i < n; ++i) {
        const double d = rule.nodes[i] + lv.values[u] - lv.values[v];
        table[(u * levels + v) * n + i] = std::exp(-d * d);
      }
  return table;
}

}  // namespace

void SubchannelModel::validate() const {
  require(total_noise_var > 0.0 && std::isfinite(total_noise_var), "total_noise_var must be positive");
  require(effective_gain >= 0.0 && std::isfinite(effective_gain), "effective_gain must be >= 0");
}

SubchannelModel make_subchannel(const Constellation& c, const ClipStats& stats, const SystemParams& sp) {
  const double rho = sp.rho();
  SubchannelModel m{rho * stats.r_factor, rho * rho * stats.clip_noise_var + sp.noise_var(), c};
  m.validate();
  return m;
}

double mixture_pdf(double y_r, double y_i, std::span<const double> p, const SubchannelModel& m) {
  const auto pts = m.constellation.points();
  require(p.size() == pts.size(), "distribution size does not match constellation order");
  const double var = m.total_noise_var;
  double acc = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double dr = y_r - m.effective_gain * pts[j].real();
    const double di = y_i - m.effective_gain * pts[j].imag();
    acc += p[j] * std::exp(-(dr * dr + di * di) / var);
  }
  return acc / (std::numbers::pi * var);
}

double noise_entropy(const SubchannelModel& m) {
  m.validate();
  return std::log2(std::numbers::pi * std::numbers::e * m.total_noise_var);
}

double output_entropy(std::span<const double> p, const SubchannelModel& m, int nodes) {
  m.validate();
  require(nodes >= 8, "quadrature needs at least 8 nodes per dimension");
  const auto pts = m.constellation.points();
  const std::size_t order = pts.size();
  require(p.size() == order, "distribution size does not match constellation order");

  const GaussHermiteRule& rule = gauss_hermite(nodes);
  const std::size_t n = rule.nodes.size();
  const double sigma = std::sqrt(m.total_noise_var);
  const double log_norm = std::log(std::numbers::pi * m.total_noise_var);

  // Component means in units of sigma; a node of component m sits at
  // mean_m + sigma * (t_i, t_k).
  std::vector<double> re(order), im(order);
  for (std::size_t j = 0; j < order; ++j) {
    re[j] = m.effective_gain * pts[j].real() / sigma;
    im[j] = m.effective_gain * pts[j].imag() / sigma;
  }
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < order; ++j)
    if (active(p[j])) support.push_back(j);

  const Levels lr = distinct_levels(re);
  const std::vector<double> er = gaussian_table(lr, rule);
  const std::size_t nr = lr.values.size();

  double h = 0.0;  // nats
  if (m.constellation.is_real()) {
    // The imaginary dimension is pure noise and integrates to -1/2 exactly,
    // so the tensor rule collapses to one dimension.
    std::vector<double> level_p(nr, 0.0);
    for (std::size_t j : support) level_p[lr.index[j]] += p[j];
    for (std::size_t mi : support) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t u = 0; u < nr; ++u) s += level_p[u] * er[(lr.index[mi] * nr + u) * n + i];
        const double log_density = s > 0.0 ? std::log(s) - 0.5 - log_norm : kLogDensityFloor;
        acc += rule.weights[i] * std::max(log_density, kLogDensityFloor);
      }
      h -= p[mi] * acc / std::sqrt(std::numbers::pi);
    }
    return h / std::numbers::ln2;
  }

  const Levels li = distinct_levels(im);
  const std::vector<double> ei = gaussian_table(li, rule);
  const std::size_t ni = li.values.size();

  // Symbols sit on the level grid, so the mixture at every node is
  // sum_u A[u0, u, i] * T[u, v0, k] with T[u, v0, k] = sum_v P[u, v] B[v0, v, k].
  std::vector<double> grid_p(nr * ni, 0.0);
  for (std::size_t j : support) grid_p[lr.index[j] * ni + li.index[j]] += p[j];
  std::vector<double> t(nr * ni * n, 0.0);
  for (std::size_t u = 0; u < nr; ++u)
    for (std::size_t v = 0; v < ni; ++v) {
      const double w = grid_p[u * ni + v];
      if (w == 0.0) continue;
      for (std::size_t v0 = 0; v0 < ni; ++v0) {
        const double* col = &ei[(v0 * ni + v) * n];
        double* dst = &t[(u * ni + v0) * n];
        for (std::size_t k = 0; k < n; ++k) dst[k] += w * col[k];
      }
    }

  std::vector<double> row(n);
  for (std::size_t mi : support) {
    const std::size_t u0 = lr.index[mi];
    const std::size_t v0 = li.index[mi];
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(row.begin(), row.end(), 0.0);
      for (std::size_t u = 0; u < nr; ++u) {
        const double cr = er[(u0 * nr + u) * n + i];
        const double* src = &t[(u * ni + v0) * n];
        for (std::size_t k = 0; k < n; ++k) row[k] += cr * src[k];
      }
      double inner = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double log_density = row[k] > 0.0 ? std::log(row[k]) - log_norm : kLogDensityFloor;
        inner += rule.weights[k] * std::max(log_density, kLogDensityFloor);
      }
      acc += rule.weights[i] * inner;
    }
    h -= p[mi] * acc / std::numbers::pi;
  }
  return h / std::numbers::ln2;
}

CapacityReport capacity(std::span<const double> p, const Constellation& c, const OfdmConfig& cfg,
                        const SystemParams& sp, int nodes, EbN0Reference ref) {
  const ClipStats stats = clip_stats(c, p, cfg, sp);
  const SubchannelModel model = make_subchannel(c, stats, sp);
  CapacityReport r;
  r.clip = stats;
  r.quadrature_nodes = nodes;
  r.h_y = output_entropy(p, model, nodes);
  r.h_noise = noise_entropy(model);
  r.capacity_bits = r.h_y - r.h_noise;
  const double sigma_x2 = stats.sigma_x * stats.sigma_x;
  r.eb_n0_db = sigma_x2 > 0.0 ? eb_n0_db(sigma_x2, c.order(), cfg, sp, ref)
                              : -std::numeric_limits<double>::infinity();
  const double rho = sp.rho();
  r.sndr = rho * rho * stats.r_factor * stats.r_factor * sigma_x2 / model.total_noise_var;
  return r;
}

CapacityReport capacity(const SymbolDistribution& p, const Constellation& c, const OfdmConfig& cfg,
                        const SystemParams& sp, int nodes, EbN0Reference ref) {
  return capacity(p.probs(), c, cfg, sp, nodes, ref);
}

namespace {

double noise_per_bit(int order, const OfdmConfig& cfg, const SystemParams& sp, EbN0Reference ref) {
  cfg.validate();
  sp.validate();
  require(order >= 2, "modulation order must be >= 2");
  const double n = cfg.n_subcarriers;
  double denom = std::log2(static_cast<double>(order)) * ((n - 2.0) / n) * sp.noise_var();
  if (ref == EbN0Reference::received) denom /= sp.rho() * sp.rho();
  return denom;
}

}  // namespace

double eb_n0_db(double sigma_x2, int order, const OfdmConfig& cfg, const SystemParams& sp, EbN0Reference ref) {
  require(sigma_x2 > 0.0, "eb_n0_db requires a positive signal variance");
  return 10.0 * std::log10(sigma_x2 / noise_per_bit(order, cfg, sp, ref));
}

double sigma_x2_for_eb_n0(double eb_n0_db, int order, const OfdmConfig& cfg, const SystemParams& sp,
                          EbN0Reference ref) {
  require(std::isfinite(eb_n0_db), "Eb/N0 must be finite");
  return std::pow(10.0, eb_n0_db / 10.0) * noise_per_bit(order, cfg, sp, ref);
}

double power_for_eb_n0(double eb_n0_db, int order, const OfdmConfig& cfg, const SystemParams& sp,
                       EbN0Reference ref) {
  return sigma_x2_for_eb_n0(eb_n0_db, order, cfg, sp, ref) / (1.0 - 2.0 / cfg.n_subcarriers);
}

const char* to_string(EbN0Reference ref) {
  return ref == EbN0Reference::received ? "received" : "transmitter";
}

EbN0Reference eb_n0_reference_from_string(const char* name) {
  if (std::strcmp(name, "received") == 0) return EbN0Reference::received;
  if (std::strcmp(name, "transmitter") == 0) return EbN0Reference::transmitter;
  throw_invalid(std::string("unknown Eb/N0 reference '") + name + "' (expected received or transmitter)");
}

}  // namespace pcs
