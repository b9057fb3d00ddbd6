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
#include "pcs/validation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "pcs/capacity.hpp"
#include "pcs/constellation.hpp"
#include "pcs/error.hpp"
#include "pcs/optimizer.hpp"
#include "pcs/rng.hpp"
#include "pcs/simulation.hpp"

namespace pcs::validation {
namespace {

// Inequality n^T p <= b. Bounds are stored by index to keep dot products cheap.
struct Constraint {
  enum Kind { lower, upper, power } kind;
  std::size_t index = 0;
};

double apply(const Constraint& c, std::span<const double> a, std::span<const double> v) {
  switch (c.kind) {
    case Constraint::lower: return -v[c.index];
    case Constraint::upper: return v[c.index];
    case Constraint::power: return std::inner_product(a.begin(), a.end(), v.begin(), 0.0);
  }
  return 0.0;
}

double bound(const Constraint& c, double power) {
  return c.kind == Constraint::lower ? 0.0 : c.kind == Constraint::upper ? 1.0 : power;
}

Eigen::VectorXd normal(const Constraint& c, std::span<const double> a) {
  Eigen::VectorXd n = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(a.size()));
  if (c.kind == Constraint::power) {
    for (std::size_t m = 0; m < a.size(); ++m) n[static_cast<Eigen::Index>(m)] = a[m];
  } else {
    n[static_cast<Eigen::Index>(c.index)] = c.kind == Constraint::upper ? 1.0 : -1.0;
  }
  return n;
}

double clipping_variance_with_pdf(double alpha, double beta, double (*pdf)(double)) {
  const double r = q_function(alpha) - q_function(beta);
  const double below = q_function(-alpha);
  const double above = q_function(beta);
  const double second = r + alpha * pdf(alpha) - beta * pdf(beta) + alpha * alpha * below + beta * beta * above;
  const double mean = pdf(alpha) - pdf(beta) + alpha * below + beta * above;
  return second - mean * mean - r * r;
}

double unnormalized_pdf(double t) { return std::exp(-0.5 * t * t) / (2.0 * std::numbers::pi); }

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

}  // namespace

std::vector<double> reference_projection(std::span<const double> q, std::span<const double> a_raw,
                                         double power_raw) {
  require(!q.empty() && q.size() == a_raw.size(), "reference_projection needs matching non-empty q and a");
  require(power_raw > 0.0, "reference_projection needs a positive power budget");
  const std::size_t M = q.size();
  const auto Mi = static_cast<Eigen::Index>(M);
  std::vector<double> a(M);
  for (std::size_t m = 0; m < M; ++m) a[m] = a_raw[m] / power_raw;
  const double power = 1.0;
  const std::size_t cheapest = static_cast<std::size_t>(std::min_element(a.begin(), a.end()) - a.begin());
  if (a[cheapest] > power * (1.0 + 1e-12)) throw Error(ErrorCode::infeasible, "power budget below the cheapest symbol energy");

  std::vector<Constraint> all;
  for (std::size_t m = 0; m < M; ++m) {
    all.push_back({Constraint::lower, m});
    all.push_back({Constraint::upper, m});
  }
  all.push_back({Constraint::power, 0});

  // Feasible vertex: all mass on the cheapest symbol, every other lower bound active.
  Eigen::VectorXd p = Eigen::VectorXd::Zero(Mi);
  p[static_cast<Eigen::Index>(cheapest)] = 1.0;
  std::vector<std::size_t> working;
  for (std::size_t m = 0; m < M; ++m)
    if (m != cheapest) working.push_back(2 * m);

  const Eigen::VectorXd qv = Eigen::Map<const Eigen::VectorXd>(q.data(), Mi);
  const double scale = 1.0 + qv.lpNorm<Eigen::Infinity>();
  const int max_iters = 50 * static_cast<int>(M) + 200;
  bool on_minimizer = false;
  for (int it = 0; it < max_iters; ++it) {
    const auto k = static_cast<Eigen::Index>(working.size()) + 1;
    Eigen::MatrixXd At(Mi, k);
    At.col(0).setOnes();
    for (std::size_t w = 0; w < working.size(); ++w)
      At.col(static_cast<Eigen::Index>(w) + 1) = normal(all[working[w]], a);
    const Eigen::VectorXd g = p - qv;
    // Least squares A^T y = -g; d = -g - A^T y is the step to the working-set minimizer.
    const Eigen::VectorXd y = At.colPivHouseholderQr().solve(-g);
    const Eigen::VectorXd d = -g - At * y;

    if (on_minimizer || d.lpNorm<Eigen::Infinity>() < 1e-12 * scale) {
      on_minimizer = false;
      // Multipliers of inequalities must be >= 0.
      Eigen::Index worst = -1;
      double most_negative = -1e-10 * scale;
      for (Eigen::Index w = 1; w < k; ++w) {
        if (y[w] < most_negative) {
          most_negative = y[w];
          worst = w;
        }
      }
      if (worst < 0) return {p.data(), p.data() + M};
      working.erase(working.begin() + (worst - 1));
      continue;
    }

    double step = 1.0;
    std::size_t blocking = all.size();
    const std::span<const double> dv(d.data(), M);
    const std::span<const double> pv(p.data(), M);
    for (std::size_t c = 0; c < all.size(); ++c) {
      if (std::find(working.begin(), working.end(), c) != working.end()) continue;
      const double rate = apply(all[c], a, dv);
      if (rate <= 1e-15) continue;
      const double slack = std::max(0.0, bound(all[c], power) - apply(all[c], a, pv));
      const double limit = slack / rate;
      if (limit < step) {
        step = limit;
        blocking = c;
      }
    }
    p += step * d;
    if (blocking < all.size())
      working.push_back(blocking);
    else
      on_minimizer = true;
  }
  throw Error(ErrorCode::infeasible, "reference projection did not terminate");
}

BussgangSuite run_bussgang_suite(long long samples, std::uint64_t seed, int grid) {
  require(grid >= 1, "Bussgang grid needs at least one point per axis");
  BussgangSuite suite;
  suite.samples = samples;
  suite.passed = true;
  std::uint64_t index = 0;
  for (double alpha : linspace(-3.0, -0.5, grid)) {
    for (double beta : linspace(0.5, 3.0, grid)) {
      BussgangCase c;
      c.alpha = alpha;
      c.beta = beta;
      c.r_analytic = attenuation_factor(alpha, beta);
      c.var_analytic = clipping_noise_variance(1.0, alpha, beta);
      c.var_unnormalized_phi = clipping_variance_with_pdf(alpha, beta, unnormalized_pdf);
      const BussgangEstimate est = empirical_bussgang(1.0, alpha, beta, samples, derive_seed(seed, index++));
      c.r_empirical = est.r_hat;
      c.var_empirical = est.var_hat;
      c.passed = std::abs(c.r_empirical - c.r_analytic) <= suite.gain_tolerance * c.r_analytic &&
                 std::abs(c.var_empirical - c.var_analytic) <= suite.variance_tolerance;
      if (std::abs(c.var_empirical - c.var_unnormalized_phi) > suite.variance_tolerance)
        suite.unnormalized_phi_rejected = true;
      suite.passed = suite.passed && c.passed;
      suite.cases.push_back(c);
    }
  }
  return suite;
}

CapacitySuite run_capacity_suite(int instances, long long samples, std::uint64_t seed, const OfdmConfig& cfg,
                                 const SystemParams& sp, int nodes) {
  require(instances >= 1, "capacity suite needs at least one instance");
  constexpr int kOrders[] = {4, 8, 16};
  CapacitySuite suite;
  suite.samples = samples;
  suite.passed = true;
  for (int k = 0; k < instances; ++k) {
    Engine rng = substream(seed, static_cast<std::uint64_t>(k));
    const ConstellationKind kind = k % 3 == 2 ? ConstellationKind::pam : ConstellationKind::qam;
    const int order = kOrders[std::uniform_int_distribution<int>(0, 2)(rng)];
    const double eb = std::uniform_real_distribution<double>(0.0, 20.0)(rng);
    const SymbolDistribution p = SymbolDistribution::random(order, rng);

    const OperatingPoint op = operating_point(Constellation::build(kind, order, true), eb, cfg, sp, EbN0Reference::received);
    const CapacityReport q = capacity(p, op.constellation, cfg, sp, nodes);
    const SubchannelModel model = make_subchannel(op.constellation, q.clip, sp);
    const MonteCarloEstimate mc = mc_mutual_information(p.probs(), model, samples, derive_seed(seed, 0x4d43 + k));

    CapacityCase c;
    c.kind = to_string(kind);
    c.order = order;
    c.eb_n0_db = eb;
    c.quadrature_bits = q.capacity_bits;
    c.monte_carlo_bits = mc.bits;
    c.monte_carlo_std_error = mc.std_error;
    c.passed = std::abs(c.quadrature_bits - c.monte_carlo_bits) <= suite.tolerance;
    suite.passed = suite.passed && c.passed;
    suite.cases.push_back(c);
  }
  return suite;
}

ProjectionSuite run_projection_suite(int instances, std::uint64_t seed) {
  require(instances >= 1, "projection suite needs at least one instance");
  constexpr int kQamOrders[] = {4, 8, 16};
  constexpr int kPamOrders[] = {4, 8, 16};
  ProjectionSuite suite;
  suite.instances = instances;
  const OptimizerConfig cfg;
  for (int k = 0; k < instances; ++k) {
    Engine rng = substream(seed, static_cast<std::uint64_t>(k));
    const bool pam = std::bernoulli_distribution(0.3)(rng);
    const int order = pam ? kPamOrders[std::uniform_int_distribution<int>(0, 2)(rng)]
                          : kQamOrders[std::uniform_int_distribution<int>(0, 2)(rng)];
    const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-1.0, 3.0)(rng));
    const Constellation c =
        Constellation::build(pam ? ConstellationKind::pam : ConstellationKind::qam, order, true).scaled(scale);
    const auto a = c.energies();

    // Budgets from just above the cheapest symbol to slack.
    const double u = std::uniform_real_distribution<double>(0.0, 1.3)(rng);
    const double power = c.min_energy() + u * (c.mean_energy() - c.min_energy()) + 1e-9 * c.mean_energy();

    const SymbolDistribution base = SymbolDistribution::random(order, rng);
    const double spread = std::pow(10.0, std::uniform_real_distribution<double>(-4.0, 0.0)(rng));
    std::normal_distribution<double> noise(0.0, spread);
    std::vector<double> q(base.probs().begin(), base.probs().end());
    for (auto& v : q) v += noise(rng);

    const ProjectionResult got = project(q, a, power, cfg);
    const std::vector<double> ref = reference_projection(q, a, power);

    double err = 0.0;
    double viol = std::abs(std::accumulate(got.p.begin(), got.p.end(), 0.0) - 1.0);
    for (std::size_t m = 0; m < q.size(); ++m) {
      err = std::max(err, std::abs(got.p[m] - ref[m]));
      viol = std::max({viol, -got.p[m], got.p[m] - 1.0});
    }
    const double energy = std::inner_product(a.begin(), a.end(), got.p.begin(), 0.0);
    viol = std::max(viol, (energy - power) / power);
    suite.max_inf_error = std::max(suite.max_inf_error, err);
    suite.max_constraint_violation = std::max(suite.max_constraint_violation, viol);
    if (err > suite.error_tolerance || viol > suite.constraint_tolerance) ++suite.failures;
  }
  suite.passed = suite.failures == 0;
  return suite;
}

}  // namespace pcs::validation
