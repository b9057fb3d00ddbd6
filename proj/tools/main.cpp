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
#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pcs_shaper.h"
#include "run_config.hpp"

using nlohmann::ordered_json;
using pcs_cli::check;
using pcs_cli::CliError;
using pcs_cli::Quantity;
using pcs_cli::RunConfig;

namespace {

struct ConstellationDeleter {
  void operator()(pcs_constellation* c) const { pcs_constellation_destroy(c); }
};
struct TraceDeleter {
  void operator()(pcs_trace* t) const { pcs_trace_destroy(t); }
};
struct SweepDeleter {
  void operator()(pcs_sweep* s) const { pcs_sweep_destroy(s); }
};
struct ConvergenceDeleter {
  void operator()(pcs_convergence* s) const { pcs_convergence_destroy(s); }
};
using ConstellationPtr = std::unique_ptr<pcs_constellation, ConstellationDeleter>;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string shortest(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

ConstellationPtr make_constellation(const RunConfig& cfg, int order) {
  pcs_constellation* c = nullptr;
  check(pcs_constellation_create(cfg.constellation_kind(), order, 1, &c));
  return ConstellationPtr(c);
}

struct OperatingPoint {
  ConstellationPtr constellation;
  double power = 0.0;
};

OperatingPoint operating_point(const RunConfig& cfg, const pcs_constellation* base, double eb_n0_db) {
  const pcs_ofdm_config o = cfg.ofdm();
  const pcs_system_params s = cfg.system();
  OperatingPoint op;
  pcs_constellation* scaled = nullptr;
  check(pcs_operating_point(base, eb_n0_db, &o, &s, cfg.reference(), &scaled, &op.power));
  op.constellation.reset(scaled);
  return op;
}

void print_warnings(const pcs_ofdm_config& o) {
  char* text = nullptr;
  check(pcs_ofdm_warnings(&o, &text));
  std::istringstream lines(text);
  pcs_string_free(text);
  for (std::string line; std::getline(lines, line);)
    if (!line.empty()) std::cerr << "warning: " << line << '\n';
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError(pcs_cli::kExitInvalidConfig, "cannot open output file '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw CliError(pcs_cli::kExitInvalidConfig, "failed writing output file '" + path + "'");
}

std::string json_document(const RunConfig& cfg, const ordered_json& results) {
  ordered_json doc;
  doc["config"] = pcs_cli::to_json(cfg);
  doc["results"] = results;
  return doc.dump(2) + "\n";
}

ordered_json clip_json(const pcs_clip_stats& c) {
  return {{"sigma_x", c.sigma_x}, {"alpha", c.alpha}, {"beta", c.beta}, {"r_factor", c.r_factor},
          {"clip_noise_var", c.clip_noise_var}};
}

std::string format_or(const std::string& format, const char* fallback) { return format.empty() ? fallback : format; }

void require_format(const std::string& format, std::initializer_list<const char*> allowed, const char* command) {
  for (const char* a : allowed)
    if (format == a) return;
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
  throw CliError(pcs_cli::kExitInvalidConfig,
                 "invalid config: format '" + format + "' is not supported by " + command + " (use " + list + ")");
}

std::string with_suffix(const std::string& path, int order, int n) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? path.substr(0, dot) : path;
  const std::string ext = has_ext ? path.substr(dot) : "";
  return stem + "_M" + std::to_string(order) + "_N" + std::to_string(n) + ext;
}

// papr-ccdf

void cmd_papr_ccdf(const RunConfig& cfg, const std::string& out, const std::string& format_flag) {
  const std::string format = format_or(format_flag, "csv");
  require_format(format, {"csv", "json"}, "papr-ccdf");
  const std::vector<int> orders = cfg.ccdf_orders.empty() ? std::vector<int>{cfg.mod_order} : cfg.ccdf_orders;
  const std::vector<int> sizes =
      cfg.ccdf_subcarriers.empty() ? std::vector<int>{cfg.n_subcarriers} : cfg.ccdf_subcarriers;
  const std::vector<double> thr = cfg.thresholds_db();
  const bool many = orders.size() * sizes.size() > 1;

  for (int m : orders) {
    for (int n : sizes) {
      RunConfig file_cfg = cfg;
      file_cfg.mod_order = m;
      file_cfg.n_subcarriers = n;
      file_cfg.ccdf_orders = {m};
      file_cfg.ccdf_subcarriers = {n};
      const pcs_ofdm_config o = file_cfg.ofdm();
      print_warnings(o);
      const ConstellationPtr c = make_constellation(file_cfg, m);
      std::vector<double> uniform(thr.size()), shaped(thr.size());
      check(pcs_papr_ccdf(c.get(), PCS_SOURCE_UNIFORM, &o, cfg.frames, 1, thr.data(), thr.size(), cfg.seed,
                          cfg.averaging(), uniform.data()));
      check(pcs_papr_ccdf(c.get(), PCS_SOURCE_RANDOM_PCS, &o, cfg.frames, cfg.distributions, thr.data(), thr.size(),
                          cfg.seed, cfg.averaging(), shaped.data()));

      std::string content;
      if (format == "csv") {
        std::ostringstream os;
        os << pcs_cli::config_comment_block(file_cfg);
        os << "threshold_db,ccdf_uniform,ccdf_pcs_mean,n_frames,seed\n";
        for (std::size_t t = 0; t < thr.size(); ++t)
          os << fmt(thr[t]) << ',' << fmt(uniform[t]) << ',' << fmt(shaped[t]) << ',' << cfg.frames << ','
             << cfg.seed << '\n';
        content = os.str();
      } else {
        content = json_document(file_cfg, {{"thresholds_db", thr},
                                           {"ccdf_uniform", uniform},
                                           {"ccdf_pcs_mean", shaped},
                                           {"n_frames", cfg.frames},
                                           {"n_distributions", cfg.distributions},
                                           {"seed", cfg.seed}});
      }
      write_output(many && !out.empty() ? with_suffix(out, m, n) : out, content);
    }
  }
}

// optimize

void cmd_optimize(const RunConfig& cfg, const std::string& out, const std::string& format_flag) {
  const std::string format = format_or(format_flag, "json");
  require_format(format, {"json", "csv"}, "optimize");
  const pcs_ofdm_config o = cfg.ofdm();
  const pcs_system_params s = cfg.system();
  print_warnings(o);
  const ConstellationPtr base = make_constellation(cfg, cfg.mod_order);
  const OperatingPoint op = operating_point(cfg, base.get(), cfg.ebn0_db);
  pcs_optimizer_config opt = cfg.optimizer();
  opt.power_budget = op.power;

  const auto m = static_cast<std::size_t>(cfg.mod_order);
  const std::vector<double> uniform(m, 1.0 / static_cast<double>(m));
  pcs_capacity_report uni{};
  check(pcs_capacity(op.constellation.get(), uniform.data(), m, &o, &s, cfg.nodes, cfg.reference(), &uni));

  pcs_trace* raw = nullptr;
  check(pcs_optimize(op.constellation.get(), &o, &s, &opt, nullptr, 0, nullptr, nullptr, &raw));
  const std::unique_ptr<pcs_trace, TraceDeleter> trace(raw);
  std::vector<double> p(m);
  check(pcs_trace_distribution(trace.get(), p.data(), m));
  pcs_capacity_report shaped{};
  check(pcs_capacity(op.constellation.get(), p.data(), m, &o, &s, cfg.nodes, cfg.reference(), &shaped));

  std::vector<double> energies(m);
  check(pcs_constellation_energies(op.constellation.get(), energies.data(), m));
  std::vector<double> times;
  for (std::size_t k = 0; k < pcs_trace_step_count(trace.get()); ++k)
    times.push_back(pcs_trace_projection_seconds(trace.get(), k));
  const double mean_time =
      times.empty() ? 0.0 : std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
  const double avg_energy = std::inner_product(energies.begin(), energies.end(), p.begin(), 0.0);

  if (format == "csv") {
    std::ostringstream os;
    os << pcs_cli::config_comment_block(cfg);
    os << "# power_budget = " << fmt(op.power) << "\n# capacity_uniform = " << fmt(uni.capacity_bits)
       << "\n# capacity_shaped = " << fmt(pcs_trace_final_capacity(trace.get()))
       << "\n# iterations = " << pcs_trace_iterations(trace.get())
       << "\n# converged = " << (pcs_trace_converged(trace.get()) ? "true" : "false")
       << "\n# mean_projection_seconds = " << fmt(mean_time) << '\n';
    os << "index,re,im,energy,probability\n";
    for (std::size_t i = 0; i < m; ++i) {
      double re = 0, im = 0;
      check(pcs_constellation_point(op.constellation.get(), static_cast<int>(i), &re, &im));
      os << i << ',' << fmt(re) << ',' << fmt(im) << ',' << fmt(energies[i]) << ',' << fmt(p[i]) << '\n';
    }
    write_output(out, os.str());
    return;
  }

  ordered_json symbols = ordered_json::array();
  for (std::size_t i = 0; i < m; ++i) {
    double re = 0, im = 0;
    check(pcs_constellation_point(op.constellation.get(), static_cast<int>(i), &re, &im));
    symbols.push_back({{"index", i}, {"re", re}, {"im", im}, {"energy", energies[i]}, {"probability", p[i]}});
  }
  std::vector<double> caps, steps;
  for (std::size_t k = 0; k < pcs_trace_capacity_count(trace.get()); ++k) caps.push_back(pcs_trace_capacity(trace.get(), k));
  for (std::size_t k = 0; k < pcs_trace_step_count(trace.get()); ++k) steps.push_back(pcs_trace_step_norm(trace.get(), k));
  ordered_json timing{{"calls", times.size()},
                      {"mean_seconds", mean_time},
                      {"min_seconds", times.empty() ? 0.0 : *std::min_element(times.begin(), times.end())},
                      {"max_seconds", times.empty() ? 0.0 : *std::max_element(times.begin(), times.end())}};
  ordered_json results{{"eb_n0_db", cfg.ebn0_db},
                       {"power_budget", op.power},
                       {"capacity_uniform", uni.capacity_bits},
                       {"capacity_shaped", pcs_trace_final_capacity(trace.get())},
                       {"average_energy", avg_energy},
                       {"sndr_uniform", uni.sndr},
                       {"sndr_shaped", shaped.sndr},
                       {"clip_uniform", clip_json(uni.clip)},
                       {"clip_shaped", clip_json(shaped.clip)},
                       {"distribution", symbols},
                       {"trace",
                        {{"iterations", pcs_trace_iterations(trace.get())},
                         {"converged", pcs_trace_converged(trace.get()) != 0},
                         {"capacities", caps},
                         {"step_norms", steps}}},
                       {"projection_timing", timing}};
  write_output(out, json_document(cfg, results));
}

// capacity-sweep

void cmd_capacity_sweep(const RunConfig& cfg, const std::string& out, const std::string& format_flag) {
  const std::string format = format_or(format_flag, "csv");
  require_format(format, {"csv", "json"}, "capacity-sweep");
  const pcs_ofdm_config o = cfg.ofdm();
  const pcs_system_params s = cfg.system();
  print_warnings(o);
  const ConstellationPtr c = make_constellation(cfg, cfg.mod_order);
  const pcs_optimizer_config opt = cfg.optimizer();
  const std::vector<double> grid = cfg.ebn0_grid();
  pcs_sweep* raw = nullptr;
  check(pcs_capacity_sweep(c.get(), &o, &s, grid.data(), grid.size(), &opt, cfg.restarts, cfg.seed, &raw));
  const std::unique_ptr<pcs_sweep, SweepDeleter> sweep(raw);
  const auto m = static_cast<std::size_t>(cfg.mod_order);

  std::ostringstream os;
  ordered_json points = ordered_json::array();
  if (format == "csv") {
    os << pcs_cli::config_comment_block(cfg);
    os << "eb_n0_db,power_budget,capacity_uniform,capacity_shaped,ratio,iterations,converged,"
          "sigma_x_uniform,alpha_uniform,beta_uniform,r_factor_uniform,clip_noise_var_uniform,"
          "sigma_x,alpha,beta,r_factor,clip_noise_var";
    for (std::size_t i = 0; i < m; ++i) os << ",p" << i;
    os << '\n';
  }
  for (std::size_t k = 0; k < pcs_sweep_size(sweep.get()); ++k) {
    pcs_sweep_point pt{};
    check(pcs_sweep_point_at(sweep.get(), k, &pt));
    std::vector<double> p(m);
    check(pcs_sweep_distribution(sweep.get(), k, p.data(), m));
    const double ratio = pt.capacity_uniform > 0.0 ? pt.capacity_shaped / pt.capacity_uniform : 0.0;
    if (format == "csv") {
      const pcs_clip_stats& u = pt.clip_uniform;
      const pcs_clip_stats& v = pt.clip_shaped;
      os << fmt(pt.eb_n0_db) << ',' << fmt(pt.power_budget) << ',' << fmt(pt.capacity_uniform) << ','
         << fmt(pt.capacity_shaped) << ',' << fmt(ratio) << ',' << pt.iterations << ',' << pt.converged << ','
         << fmt(u.sigma_x) << ',' << fmt(u.alpha) << ',' << fmt(u.beta) << ',' << fmt(u.r_factor) << ','
         << fmt(u.clip_noise_var) << ',' << fmt(v.sigma_x) << ',' << fmt(v.alpha) << ',' << fmt(v.beta) << ','
         << fmt(v.r_factor) << ',' << fmt(v.clip_noise_var);
      for (double x : p) os << ',' << fmt(x);
      os << '\n';
    } else {
      points.push_back({{"eb_n0_db", pt.eb_n0_db},
                        {"power_budget", pt.power_budget},
                        {"capacity_uniform", pt.capacity_uniform},
                        {"capacity_shaped", pt.capacity_shaped},
                        {"ratio", ratio},
                        {"iterations", pt.iterations},
                        {"converged", pt.converged != 0},
                        {"clip_uniform", clip_json(pt.clip_uniform)},
                        {"clip_shaped", clip_json(pt.clip_shaped)},
                        {"distribution", p}});
    }
  }
  write_output(out, format == "csv" ? os.str() : json_document(cfg, {{"points", points}}));
}

// convergence

void cmd_convergence(const RunConfig& cfg, const std::string& out, const std::string& format_flag) {
  const std::string format = format_or(format_flag, "csv");
  require_format(format, {"csv", "json"}, "convergence");
  const pcs_ofdm_config o = cfg.ofdm();
  const pcs_system_params s = cfg.system();
  print_warnings(o);
  const ConstellationPtr c = make_constellation(cfg, cfg.mod_order);
  const pcs_optimizer_config opt = cfg.optimizer();
  pcs_convergence* raw = nullptr;
  check(pcs_convergence_study(c.get(), &o, &s, &opt, cfg.ebn0_db, cfg.starts, cfg.seed, &raw));
  const std::unique_ptr<pcs_convergence, ConvergenceDeleter> study(raw);

  std::vector<int> iterations;
  int converged = 0;
  for (int i = 0; i < pcs_convergence_starts(study.get()); ++i) {
    iterations.push_back(pcs_convergence_iterations(study.get(), i));
    converged += pcs_convergence_converged(study.get(), i);
  }
  std::vector<double> mean_capacity;
  for (std::size_t k = 0; k < pcs_convergence_length(study.get()); ++k)
    mean_capacity.push_back(pcs_convergence_mean_capacity(study.get(), k));

  if (format == "csv") {
    std::ostringstream os;
    os << pcs_cli::config_comment_block(cfg);
    os << "# mean_iterations = " << fmt(pcs_convergence_mean_iterations(study.get())) << "\n# converged_starts = "
       << converged << "\n# mean_projection_seconds = "
       << fmt(pcs_convergence_mean_projection_seconds(study.get())) << '\n';
    os << "iteration,mean_capacity\n";
    for (std::size_t k = 0; k < mean_capacity.size(); ++k) os << k << ',' << fmt(mean_capacity[k]) << '\n';
    write_output(out, os.str());
    return;
  }
  write_output(out, json_document(cfg, {{"mean_iterations", pcs_convergence_mean_iterations(study.get())},
                                        {"converged_starts", converged},
                                        {"iterations", iterations},
                                        {"mean_capacity", mean_capacity},
                                        {"mean_projection_seconds",
                                         pcs_convergence_mean_projection_seconds(study.get())}}));
}

// validate

int cmd_validate(const RunConfig& cfg, const std::string& out, const std::string& format_flag) {
  const std::string format = format_or(format_flag, "json");
  require_format(format, {"json"}, "validate");
  const pcs_ofdm_config o = cfg.ofdm();
  const pcs_system_params s = cfg.system();
  const pcs_validate_options opts = cfg.validate_options();
  char* report = nullptr;
  int passed = 0;
  check(pcs_validate(&opts, &o, &s, &report, &passed));
  const auto parsed = ordered_json::parse(report);
  pcs_string_free(report);
  write_output(out, json_document(cfg, parsed));
  for (const char* suite : {"bussgang", "capacity", "projection"})
    std::cerr << suite << ": " << (parsed.at(suite).at("passed").get<bool>() ? "PASS" : "FAIL") << '\n';
  return passed ? pcs_cli::kExitOk : pcs_cli::kExitValidationFailed;
}

template <class T>
void both_spellings(CLI::App& app, const std::string& dashed, T& target, const std::string& help) {
  std::string underscored = dashed;
  std::replace(underscored.begin(), underscored.end(), '-', '_');
  const std::string names = underscored == dashed ? "--" + dashed : "--" + dashed + ",--" + underscored;
  app.add_option(names, target, help)->capture_default_str();
}

void quantity_option(CLI::App& app, const std::string& dashed, double& target, Quantity q, const std::string& help) {
  std::string underscored = dashed;
  std::replace(underscored.begin(), underscored.end(), '-', '_');
  const std::string names = underscored == dashed ? "--" + dashed : "--" + dashed + ",--" + underscored;
  app.add_option_function<std::string>(
         names, [&target, q, underscored](const std::string& text) { target = pcs_cli::parse_quantity(text, q, underscored); },
         help)
      ->default_str(shortest(target));
}

void bind_options(CLI::App& app, RunConfig& c, std::string& out, std::string& format) {
  app.add_option("--out", out, "Output file (stdout when empty)");
  app.add_option("--format", format, "csv or json (command default when empty)");
  both_spellings(app, "seed", c.seed, "Master RNG seed");
  both_spellings(app, "kind", c.kind, "Constellation family: qam or pam");
  app.add_option("--mod-order,--mod_order", c.mod_order, "Modulation order M")->capture_default_str();
  app.add_option("--subcarriers,--n-subcarriers,--n_subcarriers", c.n_subcarriers, "Number of subcarriers N")
      ->capture_default_str();
  both_spellings(app, "cp-length", c.cp_length, "Cyclic prefix length in samples");
  app.add_option("--ebn0-db,--ebn0_db", c.ebn0_db, "Target Eb/N0 in dB")->capture_default_str();
  both_spellings(app, "ebn0-reference", c.ebn0_reference, "Eb/N0 map: received or transmitter");
  both_spellings(app, "nodes", c.nodes, "Gauss-Hermite nodes per dimension");

  quantity_option(app, "i-min", c.i_min, Quantity::current, "Lower LED current limit (mA, or suffix A/mA/uA)");
  quantity_option(app, "i-max", c.i_max, Quantity::current, "Upper LED current limit");
  quantity_option(app, "i-dc", c.i_dc, Quantity::current, "DC bias current");
  quantity_option(app, "eta", c.eta, Quantity::eta, "Electrical-to-optical factor (W/A)");
  quantity_option(app, "gamma", c.gamma, Quantity::gamma, "Photodiode responsivity (A/W)");
  quantity_option(app, "h-gain", c.h_gain, Quantity::plain, "Optical channel gain");
  quantity_option(app, "bandwidth", c.bandwidth, Quantity::bandwidth, "Bandwidth (Hz, or suffix kHz/MHz/GHz)");
  quantity_option(app, "n0", c.n0, Quantity::noise_psd, "Noise PSD (mA^2/Hz)");

  both_spellings(app, "max-iters", c.max_iters, "PGD iteration cap");
  both_spellings(app, "step-size", c.step_size, "PGD step size");
  both_spellings(app, "tolerance", c.tolerance, "Relative-step stopping tolerance");
  both_spellings(app, "gradient-step", c.gradient_step, "Finite-difference step");
  both_spellings(app, "bisection-bound", c.bisection_bound, "Initial bisection bracket half-width");
  both_spellings(app, "bisection-max-iters", c.bisection_max_iters, "Bisection iteration cap per level");
  both_spellings(app, "projection-tolerance", c.projection_tolerance, "Projection bisection tolerance");

  both_spellings(app, "frames", c.frames, "Frames per CCDF estimate");
  both_spellings(app, "distributions", c.distributions, "Random distributions for the PCS CCDF");
  both_spellings(app, "ccdf-orders", c.ccdf_orders, "Modulation orders for papr-ccdf (default: --mod-order)");
  both_spellings(app, "ccdf-subcarriers", c.ccdf_subcarriers, "Subcarrier counts for papr-ccdf (default: --subcarriers)");
  both_spellings(app, "threshold-min-db", c.threshold_min_db, "First PAPR threshold");
  both_spellings(app, "threshold-max-db", c.threshold_max_db, "Last PAPR threshold");
  both_spellings(app, "threshold-step-db", c.threshold_step_db, "PAPR threshold spacing");
  both_spellings(app, "ccdf-averaging", c.ccdf_averaging, "per-threshold or pooled");

  both_spellings(app, "ebn0-min-db", c.ebn0_min_db, "Sweep start");
  both_spellings(app, "ebn0-max-db", c.ebn0_max_db, "Sweep end");
  both_spellings(app, "ebn0-step-db", c.ebn0_step_db, "Sweep spacing");
  both_spellings(app, "restarts", c.restarts, "Extra random starts per sweep point");

  both_spellings(app, "starts", c.starts, "Random starts for the convergence study");

  both_spellings(app, "bussgang-samples", c.bussgang_samples, "Samples per Bussgang case");
  both_spellings(app, "bussgang-grid", c.bussgang_grid, "Bussgang grid points per axis");
  both_spellings(app, "capacity-instances", c.capacity_instances, "Quadrature-vs-Monte-Carlo instances");
  both_spellings(app, "capacity-samples", c.capacity_samples, "Monte Carlo samples per instance");
  both_spellings(app, "projection-instances", c.projection_instances, "Projection oracle instances");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string out;
  std::string format;

  CLI::App app{"Probabilistic constellation shaping for clipped DCO-OFDM links"};
  app.set_config("--config", "", "key = value configuration file; command-line flags override it");
  app.set_version_flag("--version", std::string(pcs_version()));
  app.fallthrough();
  app.require_subcommand(1, 1);
  bind_options(app, cfg, out, format);
  CLI::App* papr = app.add_subcommand("papr-ccdf", "PAPR CCDF of uniform and randomly shaped signaling");
  CLI::App* optimize = app.add_subcommand("optimize", "Optimize the symbol distribution at one Eb/N0");
  CLI::App* sweep = app.add_subcommand("capacity-sweep", "Uniform and shaped capacity over an Eb/N0 grid");
  CLI::App* convergence = app.add_subcommand("convergence", "Mean PGD trajectory over random starts");
  CLI::App* validate = app.add_subcommand("validate", "Bussgang, quadrature and projection oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? pcs_cli::kExitOk : pcs_cli::kExitInvalidConfig;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  }

  try {
    cfg.validate();
    if (papr->parsed()) cmd_papr_ccdf(cfg, out, format);
    if (optimize->parsed()) cmd_optimize(cfg, out, format);
    if (sweep->parsed()) cmd_capacity_sweep(cfg, out, format);
    if (convergence->parsed()) cmd_convergence(cfg, out, format);
    if (validate->parsed()) return cmd_validate(cfg, out, format);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pcs_cli::kExitInvalidConfig;
  }
  return pcs_cli::kExitOk;
}
