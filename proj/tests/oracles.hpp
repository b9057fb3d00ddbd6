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

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace oracle {

/// x[n] = (1/sqrt(N)) sum_k X[k] exp(+j 2 pi k n / N) by direct summation.
inline std::vector<std::complex<double>> direct_idft(std::span<const std::complex<double>> bins) {
  const std::size_t n = bins.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      acc += bins[k] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k * t % n) / n);
    out[t] = acc / std::sqrt(static_cast<double>(n));
  }
  return out;
}

/// Euclidean projection onto {sum p = 1, 0 <= p <= 1, a^T p <= P} by trying
/// every clamp pattern (0, free, 1) with the power cap either inactive or
/// tight, solving the stationarity conditions on the free set, and keeping the
/// closest feasible candidate. Exponential in M; meant for M <= 8.
inline std::vector<double> enumerate_projection(std::span<const double> q, std::span<const double> a,
                                                double power) {
  const std::size_t m = q.size();
  std::size_t patterns = 1;
  for (std::size_t i = 0; i < m; ++i) patterns *= 3;
  std::vector<double> best;
  double best_dist = std::numeric_limits<double>::infinity();
  std::vector<int> state(m);
  std::vector<double> p(m);
  const double tol = 1e-9;
  for (std::size_t code = 0; code < patterns; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < m; ++i) {
      state[i] = static_cast<int>(c % 3);
      c /= 3;
    }
    double fixed_sum = 0.0, fixed_power = 0.0;
    double sq = 0.0, sa = 0.0, saa = 0.0, sqa = 0.0, nf = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (state[i] == 2) {
        fixed_sum += 1.0;
        fixed_power += a[i];
      } else if (state[i] == 1) {
        nf += 1.0;
        sq += q[i];
        sa += a[i];
        saa += a[i] * a[i];
        sqa += q[i] * a[i];
      }
    }
    for (int tight = 0; tight < 2; ++tight) {
      double nu = 0.0, lambda = 0.0;
      if (nf == 0.0) {
        if (tight) continue;
      } else if (!tight) {
        nu = (sq - (1.0 - fixed_sum)) / nf;
      } else {
        // nf nu + sa lambda = sq - (1 - fixed_sum); sa nu + saa lambda = sqa - (P - fixed_power)
        const double det = nf * saa - sa * sa;
        if (std::abs(det) < 1e-14 * (1.0 + saa * nf)) continue;
        const double r1 = sq - (1.0 - fixed_sum);
        const double r2 = sqa - (power - fixed_power);
        nu = (r1 * saa - sa * r2) / det;
        lambda = (nf * r2 - sa * r1) / det;
        if (lambda < -tol) continue;
      }
      for (std::size_t i = 0; i < m; ++i)
        p[i] = state[i] == 0 ? 0.0 : state[i] == 2 ? 1.0 : q[i] - nu - lambda * a[i];
      const double sum = std::accumulate(p.begin(), p.end(), 0.0);
      const double pw = std::inner_product(a.begin(), a.end(), p.begin(), 0.0);
      bool ok = std::abs(sum - 1.0) <= tol && pw <= power * (1.0 + tol);
      for (double v : p) ok = ok && v >= -tol && v <= 1.0 + tol;
      if (!ok) continue;
      double dist = 0.0;
      for (std::size_t i = 0; i < m; ++i) dist += (p[i] - q[i]) * (p[i] - q[i]);
      if (dist < best_dist) {
        best_dist = dist;
        best = p;
      }
    }
  }
  return best;
}

/// Residual variance of clip(x) after removing its least-squares projection
/// on x, from standard-normal samples (any generator).
template <class Rng>
double sampled_clipping_variance(double alpha, double beta, long long n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  double sx = 0, sxx = 0, sc = 0, scc = 0, sxc = 0;
  for (long long i = 0; i < n; ++i) {
    const double x = g(rng);
    const double c = std::clamp(x, alpha, beta);
    sx += x;
    sxx += x * x;
    sc += c;
    scc += c * c;
    sxc += x * c;
  }
  const double dn = static_cast<double>(n);
  const double cov = sxc / dn - (sx / dn) * (sc / dn);
  const double vx = sxx / dn - (sx / dn) * (sx / dn);
  const double vc = scc / dn - (sc / dn) * (sc / dn);
  return vc - cov * cov / vx;
}

/// h(Y) in bits on a dense rectangular grid (midpoint rule).
template <class Density>
double grid_entropy_bits(Density&& f, double lo_r, double hi_r, double lo_i, double hi_i, int n) {
  const double dr = (hi_r - lo_r) / n;
  const double di = (hi_i - lo_i) / n;
  double h = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double v = f(lo_r + (i + 0.5) * dr, lo_i + (k + 0.5) * di);
      if (v > 0.0) h -= v * std::log2(v) * dr * di;
    }
  return h;
}

}  // namespace oracle
