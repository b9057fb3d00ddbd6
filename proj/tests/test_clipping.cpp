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
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pcs/clipping.hpp"
#include "pcs/error.hpp"

using namespace pcs;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("system parameter defaults and derived products") {
  const SystemParams sp;
  CHECK(sp.i_min == 100.0);
  CHECK(sp.i_max == 1000.0);
  CHECK(sp.i_dc == 500.0);
  CHECK(sp.eta == 0.44);
  CHECK(sp.gamma == 0.54);
  CHECK(sp.h_gain == 3e-6);
  CHECK(sp.bandwidth == 20e6);
  CHECK(sp.n0 == 1e-16);
  CHECK(std::abs(sp.rho() - 0.44 * 0.54 * 3e-6) <= 1e-12 * sp.rho());
  CHECK(std::abs(sp.noise_var() - 2e-9) <= 1e-12 * 2e-9);
  CHECK_NOTHROW(sp.validate());
}

TEST_CASE("system parameter validation") {
  SystemParams sp;
  sp.i_dc = 50.0;
  CHECK_THROWS_AS(sp.validate(), Error);
  sp = SystemParams{};
  sp.eta = 0.0;
  CHECK_THROWS_AS(sp.validate(), Error);
  sp = SystemParams{};
  sp.n0 = -1.0;
  CHECK_THROWS_AS(sp.validate(), Error);
  sp = SystemParams{};
  sp.i_min = -kInf;
  sp.i_max = kInf;
  CHECK_NOTHROW(sp.validate());
}

TEST_CASE("Q function") {
  CHECK(q_function(0.0) == 0.5);
  CHECK(std::abs(q_function(2.0) - 0.022750131948) < 1e-12);
  for (double x = -8.0; x <= 8.0; x += 0.37) CHECK(std::abs(q_function(x) + q_function(-x) - 1.0) < 1e-15);
  // Deep tail against the asymptotic series phi(x)/x (1 - 1/x^2 + 3/x^4 - 15/x^6).
  const double x = 8.0;
  const double series = normal_pdf(x) / x * (1.0 - 1.0 / (x * x) + 3.0 / std::pow(x, 4) - 15.0 / std::pow(x, 6));
  CHECK(std::abs(q_function(x) / series - 1.0) < 2e-5);
}

TEST_CASE("signal variance") {
  const Constellation c = Constellation::build(ConstellationKind::qam, 16, true);
  OfdmConfig cfg;
  CHECK(signal_variance(c, SymbolDistribution::uniform(16), cfg) == doctest::Approx(0.984375).epsilon(1e-14));
  std::vector<double> lowest(16, 0.0);
  lowest[5] = 1.0;
  CHECK(c.energies()[5] == doctest::Approx(0.2));
  CHECK(signal_variance(c, lowest, cfg) == doctest::Approx(0.2 * 126.0 / 128.0).epsilon(1e-14));
  cfg.n_subcarriers = 1 << 20;
  cfg.cp_length = 0;
  CHECK(signal_variance(c, SymbolDistribution::uniform(16), cfg) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("clip_signal") {
  const SystemParams sp;  // clip window [-400, 500] around the bias
  const TimeFrame inside({-399.0, 0.0, 250.0, 499.0});
  const TimeFrame same = clip_signal(inside, sp);
  CHECK(std::equal(same.samples().begin(), same.samples().end(), inside.samples().begin()));

  // sigma_x = 200 gives beta = 2.5; a 10 sigma sample clips to beta sigma.
  const TimeFrame spike({2000.0, -2000.0});
  const TimeFrame clipped = clip_signal(spike, sp);
  CHECK(clipped.samples()[0] == 2.5 * 200.0);
  CHECK(clipped.samples()[1] == -2.0 * 200.0);

  SystemParams open = sp;
  open.i_min = -kInf;
  open.i_max = kInf;
  const TimeFrame any({1e9, -1e9, 3.0});
  const TimeFrame id = clip_signal(any, open);
  CHECK(std::equal(id.samples().begin(), id.samples().end(), any.samples().begin()));
}

TEST_CASE("attenuation factor") {
  CHECK(std::abs(attenuation_factor(-40.0, 40.0) - 1.0) < 1e-12);
  CHECK(attenuation_factor(0.0, 40.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(attenuation_factor(-2.0, 2.5) - 0.971040203) < 1e-9);
  CHECK_THROWS_AS(attenuation_factor(1.0, 1.0), Error);
  CHECK_THROWS_AS(attenuation_factor(2.0, 1.0), Error);
}

TEST_CASE("attenuation factor decreases as the window tightens") {
  double prev = 1.0;
  for (double w = 6.0; w > 0.05; w *= 0.8) {
    const double r = attenuation_factor(-w, 1.3 * w);
    CHECK(r > 0.0);
    CHECK(r < 1.0);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("clipping noise variance closed form") {
  CHECK(std::abs(clipping_noise_variance(1.0, -40.0, 40.0)) < 1e-9);
  CHECK(clipping_noise_variance(1.0, -kInf, kInf) == 0.0);
  for (double a : {-2.5, -1.0, -0.3})
    for (double b : {0.4, 1.7, 3.0})
      CHECK(clipping_noise_variance(2.0, a, b) == doctest::Approx(4.0 * clipping_noise_variance(1.0, a, b)).epsilon(1e-13));
  CHECK_THROWS_AS(clipping_noise_variance(0.0, -1.0, 1.0), Error);
  CHECK_THROWS_AS(clipping_noise_variance(1.0, 1.0, -1.0), Error);
}

TEST_CASE("clipping noise variance at +-1 matches a sampled residual") {
  std::mt19937_64 rng(41);
  const double sampled = oracle::sampled_clipping_variance(-1.0, 1.0, 10000000, rng);
  CHECK(sampled == doctest::Approx(0.0501).epsilon(0.01));
  CHECK(clipping_noise_variance(1.0, -1.0, 1.0) == doctest::Approx(sampled).epsilon(0.01));
}

TEST_CASE("closed form agrees with sampling across clip windows") {
  std::mt19937_64 rng(43);
  for (double a : {-3.0, -1.5, -0.5})
    for (double b : {0.5, 2.0}) {
      CAPTURE(a);
      CAPTURE(b);
      const double sampled = oracle::sampled_clipping_variance(a, b, 2000000, rng);
      CHECK(std::abs(clipping_noise_variance(1.0, a, b) - sampled) < 0.02 * std::max(sampled, 0.01));
    }
}

TEST_CASE("clip_stats at the default operating window") {
  const SystemParams sp;
  const ClipStats s = clip_stats_from_variance(200.0 * 200.0, sp);
  CHECK(s.sigma_x == doctest::Approx(200.0));
  CHECK(s.alpha == doctest::Approx(-2.0));
  CHECK(s.beta == doctest::Approx(2.5));
  CHECK(std::abs(s.r_factor - 0.971040203) < 1e-9);
  CHECK(s.clip_noise_var == doctest::Approx(clipping_noise_variance(200.0, -2.0, 2.5)));
}

TEST_CASE("clip_stats invariants and symmetry") {
  SystemParams sp;
  sp.i_min = 0.0;
  sp.i_max = 1000.0;
  sp.i_dc = 500.0;
  const Constellation c = Constellation::build(ConstellationKind::qam, 16, true).scaled(150.0);
  const ClipStats s = clip_stats(c, SymbolDistribution::uniform(16), OfdmConfig{}, sp);
  CHECK(s.alpha == doctest::Approx(-s.beta));
  CHECK(s.alpha == doctest::Approx((sp.i_min - sp.i_dc) / s.sigma_x));
  CHECK(s.beta == doctest::Approx((sp.i_max - sp.i_dc) / s.sigma_x));
  CHECK(s.r_factor > 0.0);
  CHECK(s.r_factor < 1.0);
  CHECK(s.clip_noise_var >= 0.0);
}

TEST_CASE("shrinking sigma_x removes clipping monotonically") {
  const SystemParams sp;
  double prev_r = 0.0;
  double prev_var = kInf;
  for (double sigma = 2000.0; sigma > 1.0; sigma *= 0.7) {
    const ClipStats s = clip_stats_from_variance(sigma * sigma, sp);
    CHECK(s.r_factor >= prev_r);
    CHECK(s.clip_noise_var <= prev_var);
    prev_r = s.r_factor;
    prev_var = s.clip_noise_var;
  }
  CHECK(prev_r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prev_var < 1e-12);
}

TEST_CASE("clipping noise is non-decreasing in sigma_x") {
  const SystemParams sp;
  double prev = 0.0;
  for (double sigma = 10.0; sigma < 1e5; sigma *= 1.1) {
    const double v = clip_stats_from_variance(sigma * sigma, sp).clip_noise_var;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("zero signal gives the no-clipping limit") {
  const ClipStats s = clip_stats_from_variance(0.0, SystemParams{});
  CHECK(s.r_factor == 1.0);
  CHECK(s.clip_noise_var == 0.0);
  CHECK(std::isinf(s.alpha));
  CHECK(std::isinf(s.beta));
}
