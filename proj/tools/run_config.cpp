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
#include "run_config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace pcs_cli {
namespace {

#define PCS_CLI_FIELDS(X)                                                                                     \
  X(kind) X(mod_order) X(n_subcarriers) X(cp_length) X(i_min) X(i_max) X(i_dc) X(eta) X(gamma) X(h_gain)     \
  X(bandwidth) X(n0) X(ebn0_db) X(ebn0_reference) X(nodes) X(max_iters) X(step_size) X(tolerance)            \
  X(gradient_step) X(bisection_bound) X(bisection_max_iters) X(projection_tolerance) X(seed) X(frames)       \
  X(distributions) X(ccdf_orders) X(ccdf_subcarriers) X(threshold_min_db) X(threshold_max_db)               \
  X(threshold_step_db) X(ccdf_averaging) X(ebn0_min_db) X(ebn0_max_db) X(ebn0_step_db) X(restarts) X(starts) \
  X(bussgang_samples) X(bussgang_grid) X(capacity_instances) X(capacity_samples) X(projection_instances)

const std::map<std::string, double>& units_for(Quantity q) {
  static const std::map<Quantity, std::map<std::string, double>> table{
      {Quantity::current, {{"", 1.0}, {"mA", 1.0}, {"A", 1e3}, {"uA", 1e-3}}},
      {Quantity::bandwidth, {{"", 1.0}, {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}},
      {Quantity::noise_psd, {{"", 1.0}, {"mA^2/Hz", 1.0}, {"A^2/Hz", 1e6}}},
      {Quantity::eta, {{"", 1.0}, {"W/A", 1.0}}},
      {Quantity::gamma, {{"", 1.0}, {"A/W", 1.0}}},
      {Quantity::plain, {{"", 1.0}}},
  };
  return table.at(q);
}

std::vector<double> inclusive_grid(double lo, double hi, double step) {
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

void require_field(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw CliError(kExitInvalidConfig, "invalid config: " + field + " " + what);
}

}  // namespace

void check(pcs_status status) {
  if (status == PCS_OK) return;
  const int code = status == PCS_ERR_INFEASIBLE ? kExitInfeasible : kExitInvalidConfig;
  throw CliError(code, pcs_last_error());
}

double parse_quantity(const std::string& text, Quantity q, const std::string& field) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE || !std::isfinite(value))
    throw CliError(kExitInvalidConfig, "invalid config: " + field + " expects a number, got '" + text + "'");
  std::string unit(end);
  unit.erase(0, unit.find_first_not_of(" \t"));
  unit.erase(unit.find_last_not_of(" \t") + 1);
  const auto& units = units_for(q);
  const auto it = units.find(unit);
  if (it == units.end()) {
    std::string accepted;
    for (const auto& [name, factor] : units)
      if (!name.empty()) accepted += (accepted.empty() ? "" : ", ") + name;
    throw CliError(kExitInvalidConfig, "invalid config: " + field + " has unknown unit '" + unit + "'" +
                                           (accepted.empty() ? "" : " (accepted: " + accepted + ")"));
  }
  return value * it->second;
}

RunConfig::RunConfig() {
  pcs_ofdm_config o;
  pcs_ofdm_config_default(&o);
  n_subcarriers = o.n_subcarriers;
  cp_length = o.cp_length;

  pcs_system_params s;
  pcs_system_params_default(&s);
  i_min = s.i_min;
  i_max = s.i_max;
  i_dc = s.i_dc;
  eta = s.eta;
  gamma = s.gamma;
  h_gain = s.h_gain;
  bandwidth = s.bandwidth;
  n0 = s.n0;

  pcs_optimizer_config p;
  pcs_optimizer_config_default(&p);
  max_iters = p.max_iters;
  step_size = p.step_size;
  tolerance = p.tolerance;
  gradient_step = p.gradient_step;
  bisection_bound = p.bisection_bound;
  bisection_max_iters = p.bisection_max_iters;
  projection_tolerance = p.projection_tolerance;
  nodes = p.quadrature_nodes;
}

pcs_constellation_kind RunConfig::constellation_kind() const { return kind == "pam" ? PCS_PAM : PCS_QAM; }

pcs_ebn0_reference RunConfig::reference() const {
  return ebn0_reference == "transmitter" ? PCS_EBN0_TRANSMITTER : PCS_EBN0_RECEIVED;
}

pcs_ccdf_averaging RunConfig::averaging() const {
  return ccdf_averaging == "pooled" ? PCS_CCDF_POOLED : PCS_CCDF_PER_THRESHOLD;
}

pcs_ofdm_config RunConfig::ofdm() const { return {n_subcarriers, cp_length}; }

pcs_system_params RunConfig::system() const { return {i_min, i_max, i_dc, eta, gamma, h_gain, bandwidth, n0}; }

pcs_optimizer_config RunConfig::optimizer() const {
  pcs_optimizer_config p;
  pcs_optimizer_config_default(&p);
  p.max_iters = max_iters;
  p.step_size = step_size;
  p.tolerance = tolerance;
  p.gradient_step = gradient_step;
  p.bisection_bound = bisection_bound;
  p.bisection_max_iters = bisection_max_iters;
  p.projection_tolerance = projection_tolerance;
  p.quadrature_nodes = nodes;
  p.eb_n0_reference = reference();
  return p;
}

pcs_validate_options RunConfig::validate_options() const {
  return {bussgang_samples, bussgang_grid, capacity_instances, capacity_samples, projection_instances, nodes, seed};
}

std::vector<double> RunConfig::thresholds_db() const {
  return inclusive_grid(threshold_min_db, threshold_max_db, threshold_step_db);
}

std::vector<double> RunConfig::ebn0_grid() const { return inclusive_grid(ebn0_min_db, ebn0_max_db, ebn0_step_db); }

void RunConfig::validate() const {
  require_field(kind == "qam" || kind == "pam", "kind", "must be qam or pam (got '" + kind + "')");
  require_field(ebn0_reference == "received" || ebn0_reference == "transmitter", "ebn0_reference",
                "must be received or transmitter (got '" + ebn0_reference + "')");
  require_field(ccdf_averaging == "per-threshold" || ccdf_averaging == "pooled", "ccdf_averaging",
                "must be per-threshold or pooled (got '" + ccdf_averaging + "')");
  require_field(std::isfinite(ebn0_db), "ebn0_db", "must be finite");
  require_field(frames >= 1000, "frames", "must be >= 1000");
  require_field(distributions >= 1, "distributions", "must be >= 1");
  require_field(threshold_step_db > 0.0, "threshold_step_db", "must be positive");
  require_field(threshold_max_db >= threshold_min_db, "threshold_max_db", "must be >= threshold_min_db");
  require_field(thresholds_db().size() <= 100000, "threshold_step_db", "yields more than 100000 thresholds");
  require_field(ebn0_step_db > 0.0, "ebn0_step_db", "must be positive");
  require_field(ebn0_max_db >= ebn0_min_db, "ebn0_max_db", "must be >= ebn0_min_db");
  require_field(ebn0_grid().size() <= 10000, "ebn0_step_db", "yields more than 10000 grid points");
  require_field(restarts >= 0, "restarts", "must be >= 0");
  require_field(starts >= 1, "starts", "must be >= 1");
  require_field(bussgang_samples >= 100000, "bussgang_samples", "must be >= 100000");
  require_field(bussgang_grid >= 1, "bussgang_grid", "must be >= 1");
  require_field(capacity_instances >= 1, "capacity_instances", "must be >= 1");
  require_field(capacity_samples >= 100000, "capacity_samples", "must be >= 100000");
  require_field(projection_instances >= 1, "projection_instances", "must be >= 1");

  const pcs_ofdm_config o = ofdm();
  const pcs_system_params s = system();
  const pcs_optimizer_config p = optimizer();
  if (pcs_validate_params(&o, &s, &p) != PCS_OK)
    throw CliError(kExitInvalidConfig, std::string("invalid config: ") + pcs_last_error());

  auto check_order = [&](int m, const std::string& field) {
    pcs_constellation* c = nullptr;
    if (pcs_constellation_create(constellation_kind(), m, 1, &c) != PCS_OK)
      throw CliError(kExitInvalidConfig, "invalid config: " + field + ": " + pcs_last_error());
    pcs_constellation_destroy(c);
  };
  check_order(mod_order, "mod_order");
  for (int m : ccdf_orders) check_order(m, "ccdf_orders");
  for (int n : ccdf_subcarriers) {
    const pcs_ofdm_config on{n, cp_length};
    if (pcs_validate_params(&on, nullptr, nullptr) != PCS_OK)
      throw CliError(kExitInvalidConfig, std::string("invalid config: ccdf_subcarriers: ") + pcs_last_error());
  }
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
#define PCS_CLI_TO_JSON(name) j[#name] = c.name;
  PCS_CLI_FIELDS(PCS_CLI_TO_JSON)
#undef PCS_CLI_TO_JSON
  return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw CliError(kExitInvalidConfig, "invalid config: expected a JSON object");
  static const std::set<std::string> known{
#define PCS_CLI_NAME(name) #name,
      PCS_CLI_FIELDS(PCS_CLI_NAME)
#undef PCS_CLI_NAME
  };
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw CliError(kExitInvalidConfig, "invalid config: unknown key '" + key + "'");
  RunConfig c;
  try {
#define PCS_CLI_FROM_JSON(name) \
  if (j.contains(#name)) j.at(#name).get_to(c.name);
    PCS_CLI_FIELDS(PCS_CLI_FROM_JSON)
#undef PCS_CLI_FROM_JSON
  } catch (const nlohmann::json::exception& e) {
    throw CliError(kExitInvalidConfig, std::string("invalid config: ") + e.what());
  }
  return c;
}

std::string config_comment_block(const RunConfig& c) {
  std::ostringstream os;
  const nlohmann::ordered_json j = to_json(c);
  for (const auto& [key, value] : j.items()) os << "# " << key << " = " << value.dump() << '\n';
  return os.str();
}

}  // namespace pcs_cli
