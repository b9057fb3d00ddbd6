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
#include <span>
#include <string>
#include <vector>

namespace pcs {

struct OfdmConfig {
  int n_subcarriers = 128;
  int cp_length = 32;

  /// Throws invalid_argument on odd N, N < 4, or cp_length outside [0, N).
  void validate() const;

  /// Gaussian modeling of the time-domain signal assumes N >= 64.
  bool clt_regime() const { return n_subcarriers >= 64; }

  /// Non-fatal diagnostics for this configuration (empty when none).
  std::vector<std::string> warnings() const;

  /// Number of data-carrying subcarriers, N/2 - 1.
  int data_subcarriers() const { return n_subcarriers / 2 - 1; }
};

/// Hermitian-symmetric subcarrier vector: X[0] = X[N/2] = 0, X[k] = X*[N-k].
class FrequencyFrame {
 public:
  explicit FrequencyFrame(std::vector<std::complex<double>> bins);

  std::span<const std::complex<double>> bins() const { return bins_; }
  std::size_t size() const { return bins_.size(); }

 private:
  std::vector<std::complex<double>> bins_;
};

/// Real time-domain OFDM symbol of N samples.
class TimeFrame {
 public:
  explicit TimeFrame(std::vector<double> samples);

  std::span<const double> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<double> samples_;
};

FrequencyFrame hermitian_load(std::span<const std::complex<double>> data, const OfdmConfig& cfg);

/// x[n] = (1/sqrt(N)) sum_k X[k] exp(j 2 pi k n / N).
TimeFrame synthesize(const FrequencyFrame& frame);

/// Forward transform with the matching 1/sqrt(N) scale.
std::vector<std::complex<double>> analyze(std::span<const double> samples);

std::vector<double> add_cp(const TimeFrame& t, const OfdmConfig& cfg);
TimeFrame remove_cp(std::span<const double> samples, const OfdmConfig& cfg);

/// Peak power over the frame's own mean power. Throws undefined_input on an
/// all-zero frame.
double papr(const TimeFrame& t);
double papr(std::span<const double> samples);
double papr_db(const TimeFrame& t);

}  // namespace pcs
