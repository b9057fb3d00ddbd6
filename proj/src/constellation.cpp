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
#include "pcs/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "pcs/error.hpp"

namespace pcs {
namespace {

bool is_power_of_two(int m) { return m >= 2 && (m & (m - 1)) == 0; }

std::vector<double> odd_levels(int count) {
  std::vector<double> levels(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) levels[static_cast<std::size_t>(i)] = 2.0 * i - (count - 1);
  return levels;
}

std::vector<std::complex<double>> grid(int columns, int rows) {
  std::vector<std::complex<double>> pts;
  pts.reserve(static_cast<std::size_t>(columns * rows));
  for (double re : odd_levels(columns))
    for (double im : odd_levels(rows)) pts.emplace_back(re, im);
  return pts;
}

std::vector<std::complex<double>> qam_points(int order) {
  switch (order) {
    case 4:
      return grid(2, 2);
    case 16:
      return grid(4, 4);
    case 64:
      return grid(8, 8);
    case 8:
      return grid(4, 2);
    case 32: {
      auto pts = grid(6, 6);
      std::erase_if(pts, [](const std::complex<double>& z) {
        return std::abs(z.real()) == 5.0 && std::abs(z.imag()) == 5.0;
      });
      return pts;
    }
    default:
      throw_invalid("QAM order must be one of 4, 8, 16, 32, 64 (got " + std::to_string(order) + ")");
  }
}

}  // namespace

Constellation::Constellation(ConstellationKind kind, std::vector<std::complex<double>> points)
    : kind_(kind), points_(std::move(points)), energies_(points_.size()) {
  std::transform(points_.begin(), points_.end(), energies_.begin(),
                 [](const std::complex<double>& z) { return std::norm(z); });
}

Constellation Constellation::build(ConstellationKind kind, int order, bool unit_power) {
  if (!is_power_of_two(order))
    throw_invalid("constellation order must be a power of two >= 2 (got " + std::to_string(order) + ")");
  std::vector<std::complex<double>> pts;
  if (kind == ConstellationKind::qam) {
    pts = qam_points(order);
  } else {
    if (order > 4096) throw_invalid("PAM order above 4096 is not supported");
    for (double level : odd_levels(order)) pts.emplace_back(level, 0.0);
  }
  Constellation c(kind, std::move(pts));
  return unit_power ? c.scaled(1.0 / std::sqrt(c.mean_energy())) : c;
}

Constellation Constellation::scaled(double factor) const {
  require(std::isfinite(factor) && factor > 0.0, "constellation scale factor must be positive");
  std::vector<std::complex<double>> pts(points_);
  for (auto& z : pts) z *= factor;
  return Constellation(kind_, std::move(pts));
}

Constellation Constellation::normalized_to(std::span<const double> weights, double target_power) const {
  const double current = average_symbol_power(*this, weights);
  require(current > 0.0, "cannot normalize a zero-power constellation");
  return scaled(std::sqrt(target_power / current));
}

bool Constellation::is_real() const {
  return std::all_of(points_.begin(), points_.end(),
                     [](const std::complex<double>& z) { return z.imag() == 0.0; });
}

double Constellation::min_energy() const { return *std::min_element(energies_.begin(), energies_.end()); }
double Constellation::max_energy() const { return *std::max_element(energies_.begin(), energies_.end()); }
double Constellation::mean_energy() const {
  return std::accumulate(energies_.begin(), energies_.end(), 0.0) / static_cast<double>(energies_.size());
}

SymbolDistribution::SymbolDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  require(probs_.size() >= 2, "distribution needs at least two symbols");
  double sum = 0.0;
  for (std::size_t m = 0; m < probs_.size(); ++m) {
    const double v = probs_[m];
    if (!(v >= 0.0 && v <= 1.0))
      throw_invalid("probability " + std::to_string(m) + " outside [0, 1]: " + std::to_string(v));
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw_invalid("probabilities sum to " + std::to_string(sum) + ", expected 1");
}

SymbolDistribution SymbolDistribution::uniform(int order) {
  require(order >= 2, "distribution order must be >= 2");
  return SymbolDistribution(std::vector<double>(static_cast<std::size_t>(order), 1.0 / order));
}

SymbolDistribution SymbolDistribution::random(int order, Engine& rng) {
  require(order >= 2, "distribution order must be >= 2");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(static_cast<std::size_t>(order));
  double sum = 0.0;
  for (auto& v : w) {
    v = expo(rng);
    sum += v;
  }
  for (auto& v : w) v = std::min(1.0, v / sum);
  return SymbolDistribution(std::move(w));
}

double average_symbol_power(const Constellation& c, std::span<const double> p) {
  const auto a = c.energies();
  require(p.size() == a.size(), "distribution size " + std::to_string(p.size()) +
                                    " does not match constellation order " + std::to_string(a.size()));
  return std::inner_product(a.begin(), a.end(), p.begin(), 0.0);
}

double average_symbol_power(const Constellation& c, const SymbolDistribution& p) {
  return average_symbol_power(c, p.probs());
}

const char* to_string(ConstellationKind kind) { return kind == ConstellationKind::qam ? "qam" : "pam"; }

ConstellationKind constellation_kind_from_string(const char* name) {
  if (std::strcmp(name, "qam") == 0 || std::strcmp(name, "QAM") == 0) return ConstellationKind::qam;
  if (std::strcmp(name, "pam") == 0 || std::strcmp(name, "PAM") == 0) return ConstellationKind::pam;
  throw_invalid(std::string("unknown constellation kind '") + name + "' (expected qam or pam)");
}

}  // namespace pcs
