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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pcs_shaper.h"

namespace pcs_cli {

/// Raised for user-facing configuration problems; carries the process exit code.
class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& message) : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitValidationFailed = 3;

/// Throws CliError with the exit code matching a failed status.
void check(pcs_status status);

enum class Quantity { current, bandwidth, noise_psd, eta, gamma, plain };

/// Parses "<number>[ ]<unit>" into base units (mA, Hz, mA^2/Hz).
double parse_quantity(const std::string& text, Quantity q, const std::string& field);

/// Every experiment knob, flat. Field names double as config-file keys.
struct RunConfig {
  std::string kind = "qam";
  int mod_order = 16;

  int n_subcarriers = 128;
  int cp_length = 32;

  double i_min = 0;
  double i_max = 0;
  double i_dc = 0;
  double eta = 0;
  double gamma = 0;
  double h_gain = 0;
  double bandwidth = 0;
  double n0 = 0;

  double ebn0_db = 15.0;
  std::string ebn0_reference = "received";
  int nodes = 32;

  int max_iters = 0;
  double step_size = 0;
  double tolerance = 0;
  double gradient_step = 0;
  double bisection_bound = 0;
  int bisection_max_iters = 0;
  double projection_tolerance = 0;

  std::uint64_t seed = 1;

  long long frames = 100000;
  int distributions = 1000;
  std::vector<int> ccdf_orders;
  std::vector<int> ccdf_subcarriers;
  double threshold_min_db = 0.0;
  double threshold_max_db = 14.0;
  double threshold_step_db = 0.25;
  std::string ccdf_averaging = "per-threshold";

  double ebn0_min_db = 0.0;
  double ebn0_max_db = 25.0;
  double ebn0_step_db = 1.0;
  int restarts = 0;

  int starts = 100;

  long long bussgang_samples = 1000000;
  int bussgang_grid = 5;
  int capacity_instances = 20;
  long long capacity_samples = 1000000;
  int projection_instances = 1000;

  /// Library defaults for the link, OFDM and optimizer fields.
  RunConfig();

  pcs_constellation_kind constellation_kind() const;
  pcs_ebn0_reference reference() const;
  pcs_ccdf_averaging averaging() const;
  pcs_ofdm_config ofdm() const;
  pcs_system_params system() const;
  /// power_budget is left at the library default; commands set it per operating point.
  pcs_optimizer_config optimizer() const;
  pcs_validate_options validate_options() const;

  std::vector<double> thresholds_db() const;
  std::vector<double> ebn0_grid() const;

  /// Throws CliError(kExitInvalidConfig) naming the offending field.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

nlohmann::ordered_json to_json(const RunConfig& c);
/// Unknown keys are rejected; missing keys keep their defaults.
RunConfig run_config_from_json(const nlohmann::json& j);

/// "# key = value" lines, one per field.
std::string config_comment_block(const RunConfig& c);

}  // namespace pcs_cli
