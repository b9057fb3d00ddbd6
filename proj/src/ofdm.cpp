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
#include "pcs/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pcs/error.hpp"
#include "pcs/fft.hpp"

namespace pcs {

void OfdmConfig::validate() const {
  require(n_subcarriers >= 4, "n_subcarriers must be >= 4 (got " + std::to_string(n_subcarriers) + ")");
  require(n_subcarriers % 2 == 0, "n_subcarriers must be even (got " + std::to_string(n_subcarriers) + ")");
  require(cp_length >= 0 && cp_length < n_subcarriers,
          "cp_length must be in [0, n_subcarriers) (got " + std::to_string(cp_length) + ")");
}

std::vector<std::string> OfdmConfig::warnings() const {
  std::vector<std::string> out;
  if (!clt_regime())
    out.push_back("n_subcarriers = " + std::to_string(n_subcarriers) +
                  " is below 64; the Gaussian clipping model may be inaccurate");
  return out;
}

FrequencyFrame::FrequencyFrame(std::vector<std::complex<double>> bins) : bins_(std::move(bins)) {
  const std::size_t n = bins_.size();
  require(n >= 4 && n % 2 == 0, "frequency frame length must be even and >= 4");
  double scale = 1.0;
  for (const auto& b : bins_) scale = std::max(scale, std::abs(b));
  const double tol = 1e-12 * scale;
  require(std::abs(bins_[0]) <= tol && std::abs(bins_[n / 2]) <= tol,
          "frequency frame must have zero DC and Nyquist bins");
  for (std::size_t k = 1; k < n / 2; ++k)
    require(std::abs(bins_[k] - std::conj(bins_[n - k])) <= tol,
            "frequency frame is not Hermitian symmetric at bin " + std::to_string(k));
}

TimeFrame::TimeFrame(std::vector<double> samples) : samples_(std::move(samples)) {
  require(!samples_.empty(), "time frame must not be empty");
}

FrequencyFrame hermitian_load(std::span<const std::complex<double>> data, const OfdmConfig& cfg) {
  cfg.validate();
  const std::size_t n = static_cast<std::size_t>(cfg.n_subcarriers);
  require(data.size() == n / 2 - 1, "hermitian_load expects N/2 - 1 = " + std::to_string(n / 2 - 1) +
                                        " symbols, got " + std::to_string(data.size()));
  std::vector<std::complex<double>> bins(n);
  for (std::size_t k = 1; k < n / 2; ++k) {
    bins[k] = data[k - 1];
    bins[n - k] = std::conj(data[k - 1]);
  }
  return FrequencyFrame(std::move(bins));
}

TimeFrame synthesize(const FrequencyFrame& frame) {
  std::vector<std::complex<double>> x(frame.bins().begin(), frame.bins().end());
  detail::dft_inplace(x, true);
  const double norm = 1.0 / std::sqrt(static_cast<double>(x.size()));
  std::vector<double> samples(x.size());
  double peak = 1.0;
  double residue = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    samples[i] = x[i].real() * norm;
    peak = std::max(peak, std::abs(samples[i]));
    residue = std::max(residue, std::abs(x[i].imag() * norm));
  }
  if (residue > 1e-9 * peak)
    throw Error(ErrorCode::undefined_input, "synthesized frame has imaginary residue " + std::to_string(residue));
  return TimeFrame(std::move(samples));
}

std::vector<std::complex<double>> analyze(std::span<const double> samples) {
  require(!samples.empty(), "analyze needs at least one sample");
  std::vector<std::complex<double>> x(samples.begin(), samples.end());
  detail::dft_inplace(x, false);
  const double norm = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (auto& v : x) v *= norm;
  return x;
}

std::vector<double> add_cp(const TimeFrame& t, const OfdmConfig& cfg) {
  cfg.validate();
  const auto s = t.samples();
  require(s.size() == static_cast<std::size_t>(cfg.n_subcarriers), "frame length does not match n_subcarriers");
  const std::size_t cp = static_cast<std::size_t>(cfg.cp_length);
  std::vector<double> out;
  out.reserve(s.size() + cp);
  out.insert(out.end(), s.end() - static_cast<std::ptrdiff_t>(cp), s.end());
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

TimeFrame remove_cp(std::span<const double> samples, const OfdmConfig& cfg) {
  cfg.validate();
  const std::size_t n = static_cast<std::size_t>(cfg.n_subcarriers);
  const std::size_t cp = static_cast<std::size_t>(cfg.cp_length);
  require(samples.size() == n + cp, "remove_cp expects " + std::to_string(n + cp) + " samples, got " +
                                        std::to_string(samples.size()));
  return TimeFrame(std::vector<double>(samples.begin() + static_cast<std::ptrdiff_t>(cp), samples.end()));
}

double papr(std::span<const double> samples) {
  double peak = 0.0;
  double sum = 0.0;
  for (double v : samples) {
    const double e = v * v;
    peak = std::max(peak, e);
    sum += e;
  }
  if (samples.empty() || peak == 0.0)
    throw Error(ErrorCode::undefined_input, "PAPR of an all-zero frame is undefined");
  return peak / (sum / static_cast<double>(samples.size()));
}

double papr(const TimeFrame& t) { return papr(t.samples()); }

double papr_db(const TimeFrame& t) { return 10.0 * std::log10(papr(t)); }

}  // namespace pcs
