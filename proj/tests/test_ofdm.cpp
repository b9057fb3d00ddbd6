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
#include <complex>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pcs/constellation.hpp"
#include "pcs/error.hpp"
#include "pcs/ofdm.hpp"

using namespace pcs;
using cd = std::complex<double>;

namespace {

std::vector<cd> random_symbols(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cd> d(n);
  for (auto& v : d) v = {g(rng), g(rng)};
  return d;
}

OfdmConfig config(int n, int cp = 0) {
  OfdmConfig c;
  c.n_subcarriers = n;
  c.cp_length = cp;
  return c;
}

}  // namespace

TEST_CASE("config validation and warnings") {
  CHECK_NOTHROW(config(4).validate());
  CHECK_THROWS_AS(config(2).validate(), Error);
  CHECK_THROWS_AS(config(7).validate(), Error);
  CHECK_THROWS_AS(config(8, 8).validate(), Error);
  CHECK_THROWS_AS(config(8, -1).validate(), Error);
  CHECK(config(32).warnings().size() == 1);
  CHECK(config(64).warnings().empty());
  CHECK(OfdmConfig{}.n_subcarriers == 128);
  CHECK(OfdmConfig{}.cp_length == 32);
}

TEST_CASE("hermitian loading") {
  const std::vector<cd> data{{1.0, 1.0}};
  const FrequencyFrame f = hermitian_load(data, config(4));
  REQUIRE(f.size() == 4);
  CHECK(f.bins()[0] == cd(0, 0));
  CHECK(f.bins()[1] == cd(1, 1));
  CHECK(f.bins()[2] == cd(0, 0));
  CHECK(f.bins()[3] == cd(1, -1));

  const FrequencyFrame z = hermitian_load(std::vector<cd>(3), config(8));
  for (const auto& b : z.bins()) CHECK(b == cd(0, 0));

  CHECK_THROWS_AS(hermitian_load(std::vector<cd>(2), config(8)), Error);
}

TEST_CASE("frequency frames reject broken symmetry") {
  CHECK_THROWS_AS(FrequencyFrame({{1, 0}, {1, 0}, {0, 0}, {1, 0}}), Error);
  CHECK_THROWS_AS(FrequencyFrame({{0, 0}, {1, 1}, {0, 0}, {1, 1}}), Error);
  CHECK_THROWS_AS(FrequencyFrame({{0, 0}, {1, 0}, {0.5, 0}, {1, 0}}), Error);
  CHECK_NOTHROW(FrequencyFrame({{0, 0}, {1, 1}, {0, 0}, {1, -1}}));
}

TEST_CASE("loaded frames satisfy the symmetry invariant") {
  std::mt19937_64 rng(5);
  for (int n : {4, 8, 64, 128, 256}) {
    const auto f = hermitian_load(random_symbols(static_cast<std::size_t>(n / 2 - 1), rng), config(n));
    const auto b = f.bins();
    CHECK(b[0] == cd(0, 0));
    CHECK(b[n / 2] == cd(0, 0));
    for (int k = 1; k < n / 2; ++k) CHECK(std::abs(b[k] - std::conj(b[n - k])) <= 1e-12);
  }
}

TEST_CASE("synthesis of small frames") {
  const TimeFrame z = synthesize(FrequencyFrame(std::vector<cd>(8)));
  for (double v : z.samples()) CHECK(v == 0.0);

  const TimeFrame t = synthesize(FrequencyFrame({{0, 0}, {1, 0}, {0, 0}, {1, 0}}));
  const double expected[] = {1.0, 0.0, -1.0, 0.0};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(t.samples()[i] - expected[i]) < 1e-15);
}

TEST_CASE("synthesis matches the direct inverse DFT and is real") {
  std::mt19937_64 rng(17);
  for (int n : {4, 6, 10, 12, 16, 64, 128, 512}) {
    CAPTURE(n);
    std::vector<cd> bins(static_cast<std::size_t>(n));
    const auto data = random_symbols(static_cast<std::size_t>(n / 2 - 1), rng);
    for (int k = 1; k < n / 2; ++k) {
      bins[k] = data[k - 1];
      bins[n - k] = std::conj(data[k - 1]);
    }
    const auto ref = oracle::direct_idft(bins);
    const TimeFrame t = synthesize(FrequencyFrame(bins));
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(ref[i].imag()) < 1e-9);
      CHECK(std::abs(t.samples()[i] - ref[i].real()) < 1e-10);
    }
  }
}

TEST_CASE("analyze inverts synthesize") {
  std::mt19937_64 rng(23);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = trial % 2 ? 128 : 64;
    const auto f = hermitian_load(random_symbols(static_cast<std::size_t>(n / 2 - 1), rng), config(n));
    const auto back = analyze(synthesize(f).samples());
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(back[k] - f.bins()[k]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("analyze of constant and impulse") {
  const std::vector<double> constant(16, 2.5);
  const auto c = analyze(constant);
  CHECK(std::abs(c[0] - cd(2.5 * 4.0, 0.0)) < 1e-12);
  for (int k = 1; k < 16; ++k) CHECK(std::abs(c[k]) < 1e-12);

  std::vector<double> impulse(16, 0.0);
  impulse[0] = 1.0;
  for (const auto& v : analyze(impulse)) CHECK(std::abs(v - cd(0.25, 0.0)) < 1e-15);
}

TEST_CASE("Parseval holds under the chosen scaling") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = hermitian_load(random_symbols(63, rng), config(128));
    const auto t = synthesize(f);
    double et = 0.0, ef = 0.0;
    for (double v : t.samples()) et += v * v;
    for (const auto& b : f.bins()) ef += std::norm(b);
    CHECK(std::abs(et - ef) < 1e-9 * std::max(1.0, ef));
  }
}

TEST_CASE("cyclic prefix") {
  const TimeFrame t({1.0, 2.0, 3.0, 4.0});
  const auto with = add_cp(t, config(4, 1));
  CHECK(with == std::vector<double>{4.0, 1.0, 2.0, 3.0, 4.0});
  CHECK(add_cp(t, config(4, 0)) == std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK_THROWS_AS(remove_cp(std::vector<double>{1, 2, 3}, config(4, 1)), Error);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto cfg = config(128, 32);
    const TimeFrame frame = synthesize(hermitian_load(random_symbols(63, rng), cfg));
    const auto prefixed = add_cp(frame, cfg);
    REQUIRE(prefixed.size() == 160);
    for (int i = 0; i < 32; ++i) CHECK(prefixed[i] == frame.samples()[96 + i]);
    const TimeFrame back = remove_cp(prefixed, cfg);
    CHECK(std::equal(back.samples().begin(), back.samples().end(), frame.samples().begin()));
  }
}

TEST_CASE("PAPR basics") {
  CHECK(papr(TimeFrame({2.0, -2.0, 2.0, -2.0})) == doctest::Approx(1.0));
  CHECK(papr(TimeFrame({1.0, 0.0, 0.0, 0.0})) == doctest::Approx(4.0));
  CHECK(papr_db(TimeFrame({1.0, 0.0, 0.0, 0.0})) == doctest::Approx(6.0206).epsilon(1e-4));
  try {
    papr(TimeFrame({0.0, 0.0, 0.0, 0.0}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::undefined_input);
  }
}

TEST_CASE("mean frame power matches the subcarrier factor") {
  const Constellation c = Constellation::build(ConstellationKind::qam, 16, true);
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> pick(0, 15);
  for (int n : {64, 128}) {
    const auto cfg = config(n);
    double acc = 0.0;
    const int frames = 20000;
    std::vector<cd> data(static_cast<std::size_t>(n / 2 - 1));
    for (int f = 0; f < frames; ++f) {
      for (auto& d : data) d = c.points()[pick(rng)];
      const TimeFrame t = synthesize(hermitian_load(data, cfg));
      for (double v : t.samples()) acc += v * v;
    }
    const double mean = acc / (static_cast<double>(frames) * n);
    CHECK(std::abs(mean / (1.0 - 2.0 / n) - 1.0) < 0.01);
  }
}
