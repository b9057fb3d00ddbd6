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
#include "pcs/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "pcs/error.hpp"
#include "pcs/parallel.hpp"

namespace pcs {
namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

double clamped_profile(double lambda, double nu, std::span<const double> q, std::span<const double> a,
                       std::vector<double>& p) {
  double power = 0.0;
  for (std::size_t m = 0; m < q.size(); ++m) {
    p[m] = std::clamp(q[m] - lambda * a[m] - nu, 0.0, 1.0);
    power += a[m] * p[m];
  }
  return power;
}

void check_projection_inputs(std::span<const double> q, std::span<const double> a, double power) {
  require(!q.empty() && q.size() == a.size(), "projection needs equal-length q and a");
  require(std::isfinite(power) && power > 0.0, "power budget must be positive");
  for (std::size_t m = 0; m < q.size(); ++m) {
    require(std::isfinite(q[m]), "projection input q has a non-finite entry");
    require(std::isfinite(a[m]) && a[m] >= 0.0, "symbol energies must be finite and >= 0");
  }
}

}  // namespace

void OptimizerConfig::validate() const {
  require(max_iters >= 1, "max_iters must be >= 1");
  require(step_size > 0.0 && std::isfinite(step_size), "step_size must be positive");
  require(tolerance > 0.0 && tolerance < 1.0, "tolerance must be in (0, 1)");
  require(gradient_step > 0.0 && gradient_step < 0.5, "gradient_step must be in (0, 0.5)");
  require(power_budget > 0.0 && std::isfinite(power_budget), "power_budget must be positive");
  require(bisection_bound > 0.0 && std::isfinite(bisection_bound), "bisection_bound must be positive");
  require(bisection_max_iters >= 1, "bisection_max_iters must be >= 1");
  require(projection_tolerance > 0.0 && projection_tolerance < 1.0, "projection_tolerance must be in (0, 1)");
  require(quadrature_nodes >= 8 && quadrature_nodes <= 256, "quadrature_nodes must be in [8, 256]");
}

std::vector<double> numerical_gradient(const Functional& f, std::span<const double> p, double step) {
  require(step > 0.0, "gradient step must be positive");
  const std::size_t n = p.size();
  const bool needs_center = std::any_of(p.begin(), p.end(), [&](double v) { return v - step < 0.0 || v + step > 1.0; });
  const std::optional<double> center = needs_center ? std::optional<double>(f(p)) : std::nullopt;

  std::vector<double> g(n);
  parallel_for(n, [&](std::size_t m) {
    std::vector<double> x(p.begin(), p.end());
    const bool down_ok = p[m] - step >= 0.0;
    const bool up_ok = p[m] + step <= 1.0;
    if (down_ok && up_ok) {
      x[m] = p[m] + step;
      const double up = f(x);
      x[m] = p[m] - step;
      const double down = f(x);
      g[m] = (up - down) / (2.0 * step);
    } else if (up_ok) {
      x[m] = p[m] + step;
      g[m] = (f(x) - *center) / step;
    } else {
      x[m] = p[m] - step;
      g[m] = (*center - f(x)) / step;
    }
  });
  return g;
}

LambdaSolution solve_lambda(double nu, std::span<const double> q, std::span<const double> a, double power,
                            const OptimizerConfig& cfg) {
  check_projection_inputs(q, a, power);
  const double tol = cfg.projection_tolerance;
  LambdaSolution out;
  out.p.resize(q.size());
  if (clamped_profile(0.0, nu, q, a, out.p) <= power + tol) return out;

  // Past this bound every coordinate with a_m > 0 is clamped to zero.
  double hi = cfg.bisection_bound;
  for (std::size_t m = 0; m < q.size(); ++m)
    if (a[m] > 0.0) hi = std::max(hi, (q[m] - nu) / a[m]);
  double lo = 0.0;
  std::vector<double> scratch(q.size());
  for (int it = 1; it <= cfg.bisection_max_iters && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    out.iterations = it;
    const double pw = clamped_profile(mid, nu, q, a, scratch);
    if (std::abs(pw - power) <= tol) {
      out.p.swap(scratch);
      out.lambda = mid;
      return out;
    }
    if (pw > power)
      lo = mid;
    else
      hi = mid;
  }
  // Bracket collapsed: return the upper end, which satisfies the cap.
  clamped_profile(hi, nu, q, a, out.p);
  out.lambda = hi;
  return out;
}

ProjectionResult project(std::span<const double> q, std::span<const double> a, double power,
                         const OptimizerConfig& cfg) {
  check_projection_inputs(q, a, power);
  const double min_a = *std::min_element(a.begin(), a.end());
  if (power < min_a * (1.0 - 1e-12))
    throw Error(ErrorCode::infeasible, "power budget " + std::to_string(power) +
                                           " is below the smallest symbol energy " + std::to_string(min_a) +
                                           "; no distribution satisfies the cap");

  // Work with a / P so both tolerances are relative.
  std::vector<double> an(a.begin(), a.end());
  for (auto& v : an) v /= power;
  OptimizerConfig inner = cfg;
  inner.projection_tolerance = cfg.projection_tolerance * 1e-2;
  const double tol = cfg.projection_tolerance;

  auto solve = [&](double nu) { return solve_lambda(nu, q, an, 1.0, inner); };
  auto total = [](const std::vector<double>& p) { return std::accumulate(p.begin(), p.end(), 0.0); };

  const auto [qmin, qmax] = std::minmax_element(q.begin(), q.end());
  double hi = std::max(cfg.bisection_bound, *qmax);
  double lo = std::min(-cfg.bisection_bound, *qmin - 1.0);
  for (int e = 0; e < 64 && total(solve(lo).p) < 1.0 - tol; ++e) lo -= (hi - lo);

  ProjectionResult out;
  LambdaSolution sol;
  for (int it = 1; it <= cfg.bisection_max_iters && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    sol = solve(mid);
    out.outer_iterations = it;
    out.nu = mid;
    const double s = total(sol.p);
    if (std::abs(s - 1.0) <= tol) {
      out.converged = true;
      break;
    }
    if (s > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  if (sol.p.empty()) {
    out.nu = 0.5 * (lo + hi);
    sol = solve(out.nu);
  }
  out.p = std::move(sol.p);
  out.lambda = sol.lambda / power;
  return out;
}

ProjectionResult project(std::span<const double> q, const Constellation& c, double power,
                         const OptimizerConfig& cfg) {
  return project(q, c.energies(), power, cfg);
}

bool is_feasible(std::span<const double> p, std::span<const double> a, double power, double tol) {
  if (p.size() != a.size()) return false;
  double sum = 0.0;
  double pw = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    if (!(p[m] >= -tol && p[m] <= 1.0 + tol)) return false;
    sum += p[m];
    pw += a[m] * p[m];
  }
  return std::abs(sum - 1.0) <= tol && pw <= power * (1.0 + tol);
}

OptimizerTrace optimize(const Constellation& c, const OfdmConfig& ofdm, const SystemParams& sp,
                        const OptimizerConfig& opt, const SymbolDistribution& start,
                        const IterationObserver& observer) {
  opt.validate();
  ofdm.validate();
  sp.validate();
  const auto a = c.energies();
  const double power = opt.power_budget;
  require(start.size() == a.size(), "start distribution size does not match constellation order");
  if (power < c.min_energy() * (1.0 - 1e-12))
    throw Error(ErrorCode::infeasible, "power budget " + std::to_string(power) +
                                           " is below the smallest symbol energy " +
                                           std::to_string(c.min_energy()));
  require(is_feasible(start.probs(), a, power, 1e-6), "optimizer start violates the power budget");

  const Functional f = [&](std::span<const double> w) {
    return capacity(w, c, ofdm, sp, opt.quadrature_nodes, opt.eb_n0_reference).capacity_bits;
  };

  OptimizerTrace trace;
  std::vector<double> p(start.probs().begin(), start.probs().end());
  double cap = f(p);
  trace.capacities.push_back(cap);
  trace.iterates.push_back(p);
  std::vector<double> best = p;
  double best_cap = cap;

  std::vector<double> q(p.size());
  for (int k = 1; k <= opt.max_iters; ++k) {
    const std::vector<double> g = numerical_gradient(f, p, opt.gradient_step);
    for (std::size_t m = 0; m < p.size(); ++m) q[m] = p[m] + opt.step_size * g[m];

    const auto t0 = std::chrono::steady_clock::now();
    ProjectionResult proj = project(q, a, power, opt);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<double> diff(p.size());
    for (std::size_t m = 0; m < p.size(); ++m) diff[m] = proj.p[m] - p[m];
    const double rel = norm2(diff) / norm2(p);

    p = std::move(proj.p);
    cap = f(p);
    trace.iterations = k;
    trace.capacities.push_back(cap);
    trace.step_norms.push_back(rel);
    trace.projection_seconds.push_back(seconds);
    trace.iterates.push_back(p);
    if (observer) observer(IterationEvent{k, cap, rel, seconds});
    if (cap >= best_cap) {
      best_cap = cap;
      best = p;
    }
    if (rel <= opt.tolerance) {
      trace.converged = true;
      break;
    }
  }

  const double sum = std::accumulate(best.begin(), best.end(), 0.0);
  for (auto& v : best) v = std::clamp(v / sum, 0.0, 1.0);
  trace.final_distribution = SymbolDistribution(std::move(best));
  trace.final_capacity = best_cap;
  return trace;
}

}  // namespace pcs
