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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pcs/rng.hpp"

namespace pcs {

enum class ConstellationKind { qam, pam };

/// Fixed set of M complex symbol points with their energies |X_m|^2.
///
/// Square QAM orders (4, 16, 64) use the odd-integer grid, index m = i*L + j
/// with real part from column i and imaginary part from row j. 8-QAM is the
/// 4x2 rectangular grid, 32-QAM the 6x6 grid with its four corners removed.
/// PAM levels sit on the real axis in increasing order.
class Constellation {
 public:
  static Constellation build(ConstellationKind kind, int order, bool unit_power);

  /// Same geometry with every point multiplied by `factor`.
  Constellation scaled(double factor) const;

  /// Rescaled so that sum_m weights[m] |X_m|^2 == target_power.
  Constellation normalized_to(std::span<const double> weights, double target_power) const;

  ConstellationKind kind() const { return kind_; }
  int order() const { return static_cast<int>(points_.size()); }
  std::span<const std::complex<double>> points() const { return points_; }
  std::span<const double> energies() const { return energies_; }

  /// True when every point has zero imaginary part.
  bool is_real() const;

  double min_energy() const;
  double max_energy() const;
  double mean_energy() const;

 private:
  Constellation(ConstellationKind kind, std::vector<std::complex<double>> points);

  ConstellationKind kind_;
  std::vector<std::complex<double>> points_;
  std::vector<double> energies_;
};

/// Probability vector over the symbols of a constellation.
class SymbolDistribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  /// Throws invalid_argument unless every entry is in [0, 1] and the sum is 1.
  explicit SymbolDistribution(std::vector<double> probs);

  static SymbolDistribution uniform(int order);

  /// Flat-Dirichlet draw (uniform on the simplex).
  static SymbolDistribution random(int order, Engine& rng);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t m) const { return probs_[m]; }

 private:
  std::vector<double> probs_;
};

/// sum_m p_m |X_m|^2 (per-symbol energy, before the subcarrier factor).
double average_symbol_power(const Constellation& c, std::span<const double> p);
double average_symbol_power(const Constellation& c, const SymbolDistribution& p);

const char* to_string(ConstellationKind kind);
ConstellationKind constellation_kind_from_string(const char* name);

}  // namespace pcs
