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
#include "pcs/fft.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>
#include <vector>

namespace pcs::detail {
namespace {

struct Plan {
  std::vector<std::complex<double>> twiddles;  // exp(-j 2 pi k / n), k < n/2
  std::vector<std::size_t> bit_reverse;
};

const Plan& plan_for(std::size_t n) {
  thread_local std::unordered_map<std::size_t, Plan> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Plan plan;
  plan.twiddles.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k)
    plan.twiddles[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
  plan.bit_reverse.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    plan.bit_reverse[i] = r;
  }
  return cache.emplace(n, std::move(plan)).first->second;
}

void radix2(std::span<std::complex<double>> x, bool inverse) {
  const std::size_t n = x.size();
  const Plan& plan = plan_for(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = plan.bit_reverse[i];
    if (i < r) std::swap(x[i], x[r]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> w = plan.twiddles[k * stride];
        if (inverse) w = std::conj(w);
        const std::complex<double> u = x[start + k];
        const std::complex<double> v = x[start + k + half] * w;
        x[start + k] = u + v;
        x[start + k + half] = u - v;
      }
    }
  }
}

void direct(std::span<std::complex<double>> x, bool inverse) {
  const std::size_t n = x.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{};
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * std::polar(1.0, angle);
    }
    out[k] = acc;
  }
  std::copy(out.begin(), out.end(), x.begin());
}

}  // namespace

void dft_inplace(std::span<std::complex<double>> data, bool inverse) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  if ((n & (n - 1)) == 0)
    radix2(data, inverse);
  else
    direct(data, inverse);
}

}  // namespace pcs::detail
