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
#include "pcs_shaper.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "pcs/capacity.hpp"
#include "pcs/clipping.hpp"
#include "pcs/constellation.hpp"
#include "pcs/error.hpp"
#include "pcs/ofdm.hpp"
#include "pcs/optimizer.hpp"
#include "pcs/simulation.hpp"
#include "pcs/validation.hpp"
#include "json.hpp"

struct pcs_constellation {
  pcs::Constellation value;
};

struct pcs_trace {
  pcs::OptimizerTrace value;
};

struct pcs_sweep {
  std::vector<pcs::SweepPoint> value;
};

struct pcs_convergence {
  pcs::ConvergenceStudy value;
};

namespace {

thread_local std::string g_last_error;

pcs_status to_status(pcs::ErrorCode code) {
  switch (code) {
    case pcs::ErrorCode::invalid_argument: return PCS_ERR_INVALID_ARGUMENT;
    case pcs::ErrorCode::infeasible: return PCS_ERR_INFEASIBLE;
    case pcs::ErrorCode::undefined_input: return PCS_ERR_UNDEFINED_INPUT;
    case pcs::ErrorCode::io_error: return PCS_ERR_IO;
  }
  return PCS_ERR_INTERNAL;
}

template <class F>
pcs_status guarded(F&& body) noexcept {
  try {
    g_last_error.clear();
    body();
    return PCS_OK;
  } catch (const pcs::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PCS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PCS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PCS_ERR_INTERNAL;
  }
}

template <class T>
const T& deref(const T* ptr, const char* name) {
  if (ptr == nullptr) pcs::throw_invalid(std::string(name) + " must not be NULL");
  return *ptr;
}

void need(const void* ptr, const char* name) {
  if (ptr == nullptr) pcs::throw_invalid(std::string(name) + " must not be NULL");
}

pcs::SystemParams from_c(const pcs_system_params& s) {
  return {s.i_min, s.i_max, s.i_dc, s.eta, s.gamma, s.h_gain, s.bandwidth, s.n0};
}

pcs::OfdmConfig from_c(const pcs_ofdm_config& c) { return {c.n_subcarriers, c.cp_length}; }

pcs::EbN0Reference from_c(pcs_ebn0_reference r) {
  if (r != PCS_EBN0_RECEIVED && r != PCS_EBN0_TRANSMITTER) pcs::throw_invalid("unknown Eb/N0 reference");
  return r == PCS_EBN0_RECEIVED ? pcs::EbN0Reference::received : pcs::EbN0Reference::transmitter;
}

pcs::OptimizerConfig from_c(const pcs_optimizer_config& o) {
  pcs::OptimizerConfig cfg;
  cfg.max_iters = o.max_iters;
  cfg.step_size = o.step_size;
  cfg.tolerance = o.tolerance;
  cfg.gradient_step = o.gradient_step;
  cfg.power_budget = o.power_budget;
  cfg.bisection_bound = o.bisection_bound;
  cfg.bisection_max_iters = o.bisection_max_iters;
  cfg.projection_tolerance = o.projection_tolerance;
  cfg.quadrature_nodes = o.quadrature_nodes;
  cfg.eb_n0_reference = from_c(o.eb_n0_reference);
  return cfg;
}

pcs_clip_stats to_c(const pcs::ClipStats& s) {
  return {s.sigma_x, s.alpha, s.beta, s.r_factor, s.clip_noise_var};
}

std::span<const double> view(const double* p, std::size_t n, const char* name) {
  need(p, name);
  return {p, n};
}

void require_size(std::size_t got, int order, const char* name) {
  if (got != static_cast<std::size_t>(order))
    pcs::throw_invalid(std::string(name) + " has " + std::to_string(got) + " entries, expected " +
                       std::to_string(order));
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* pcs_last_error(void) { return g_last_error.c_str(); }
const char* pcs_version(void) { return "1.0.0"; }
void pcs_string_free(char* s) { delete[] s; }

void pcs_system_params_default(pcs_system_params* out) {
  if (out == nullptr) return;
  const pcs::SystemParams d;
  *out = {d.i_min, d.i_max, d.i_dc, d.eta, d.gamma, d.h_gain, d.bandwidth, d.n0};
}

void pcs_ofdm_config_default(pcs_ofdm_config* out) {
  if (out == nullptr) return;
  const pcs::OfdmConfig d;
  *out = {d.n_subcarriers, d.cp_length};
}

void pcs_optimizer_config_default(pcs_optimizer_config* out) {
  if (out == nullptr) return;
  const pcs::OptimizerConfig d;
  *out = {d.max_iters,       d.step_size,           d.tolerance,
          d.gradient_step,   d.power_budget,        d.bisection_bound,
          d.bisection_max_iters, d.projection_tolerance, d.quadrature_nodes,
          d.eb_n0_reference == pcs::EbN0Reference::received ? PCS_EBN0_RECEIVED : PCS_EBN0_TRANSMITTER};
}

pcs_status pcs_ofdm_warnings(const pcs_ofdm_config* cfg, char** out) {
  return guarded([&] {
    need(out, "out");
    const pcs::OfdmConfig c = from_c(deref(cfg, "cfg"));
    c.validate();
    std::string joined;
    for (const auto& w : c.warnings()) joined += w + "\n";
    *out = copy_string(joined);
  });
}

pcs_status pcs_validate_params(const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                               const pcs_optimizer_config* opt) {
  return guarded([&] {
    if (cfg != nullptr) from_c(*cfg).validate();
    if (sp != nullptr) from_c(*sp).validate();
    if (opt != nullptr) from_c(*opt).validate();
  });
}

pcs_status pcs_constellation_create(pcs_constellation_kind kind, int order, int unit_power,
                                    pcs_constellation** out) {
  return guarded([&] {
    need(out, "out");
    if (kind != PCS_QAM && kind != PCS_PAM) pcs::throw_invalid("unknown constellation kind");
    const auto k = kind == PCS_QAM ? pcs::ConstellationKind::qam : pcs::ConstellationKind::pam;
    *out = new pcs_constellation{pcs::Constellation::build(k, order, unit_power != 0)};
  });
}

pcs_status pcs_constellation_scaled(const pcs_constellation* c, double factor, pcs_constellation** out) {
  return guarded([&] {
    need(out, "out");
    *out = new pcs_constellation{deref(c, "constellation").value.scaled(factor)};
  });
}

void pcs_constellation_destroy(pcs_constellation* c) { delete c; }

int pcs_constellation_order(const pcs_constellation* c) { return c == nullptr ? 0 : c->value.order(); }

pcs_status pcs_constellation_point(const pcs_constellation* c, int m, double* re, double* im) {
  return guarded([&] {
    const auto pts = deref(c, "constellation").value.points();
    if (m < 0 || static_cast<std::size_t>(m) >= pts.size()) pcs::throw_invalid("symbol index out of range");
    if (re != nullptr) *re = pts[static_cast<std::size_t>(m)].real();
    if (im != nullptr) *im = pts[static_cast<std::size_t>(m)].imag();
  });
}

pcs_status pcs_constellation_energies(const pcs_constellation* c, double* out, size_t n) {
  return guarded([&] {
    const auto& cc = deref(c, "constellation").value;
    need(out, "out");
    require_size(n, cc.order(), "energy buffer");
    const auto e = cc.energies();
    std::copy(e.begin(), e.end(), out);
  });
}

pcs_status pcs_operating_point(const pcs_constellation* c, double eb_n0_db, const pcs_ofdm_config* cfg,
                               const pcs_system_params* sp, pcs_ebn0_reference ref, pcs_constellation** scaled,
                               double* power_budget) {
  return guarded([&] {
    need(scaled, "scaled");
    const pcs::OperatingPoint op = pcs::operating_point(deref(c, "constellation").value, eb_n0_db,
                                                        from_c(deref(cfg, "cfg")), from_c(deref(sp, "sp")), from_c(ref));
    if (power_budget != nullptr) *power_budget = op.power_budget;
    *scaled = new pcs_constellation{op.constellation};
  });
}

pcs_status pcs_capacity(const pcs_constellation* c, const double* p, size_t n, const pcs_ofdm_config* cfg,
                        const pcs_system_params* sp, int nodes, pcs_ebn0_reference ref, pcs_capacity_report* out) {
  return guarded([&] {
    const auto& cc = deref(c, "constellation").value;
    need(out, "out");
    require_size(n, cc.order(), "distribution");
    const auto probs = view(p, n, "p");
    const pcs::SymbolDistribution dist(std::vector<double>(probs.begin(), probs.end()));
    const pcs::CapacityReport r =
        pcs::capacity(dist, cc, from_c(deref(cfg, "cfg")), from_c(deref(sp, "sp")), nodes, from_c(ref));
    *out = {r.capacity_bits, r.h_y, r.h_noise, r.eb_n0_db, r.sndr, to_c(r.clip)};
  });
}

pcs_status pcs_clip_stats_for(const pcs_constellation* c, const double* p, size_t n, const pcs_ofdm_config* cfg,
                              const pcs_system_params* sp, pcs_clip_stats* out) {
  return guarded([&] {
    const auto& cc = deref(c, "constellation").value;
    need(out, "out");
    require_size(n, cc.order(), "distribution");
    *out = to_c(pcs::clip_stats(cc, view(p, n, "p"), from_c(deref(cfg, "cfg")), from_c(deref(sp, "sp"))));
  });
}

pcs_status pcs_power_for_eb_n0(double eb_n0_db, int order, const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                               pcs_ebn0_reference ref, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = pcs::power_for_eb_n0(eb_n0_db, order, from_c(deref(cfg, "cfg")), from_c(deref(sp, "sp")), from_c(ref));
  });
}

pcs_status pcs_eb_n0_db(double sigma_x2, int order, const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                        pcs_ebn0_reference ref, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = pcs::eb_n0_db(sigma_x2, order, from_c(deref(cfg, "cfg")), from_c(deref(sp, "sp")), from_c(ref));
  });
}

pcs_status pcs_project(const double* q, const double* a, size_t n, double power, const pcs_optimizer_config* opt,
                       double* p_out, double* lambda, double* nu) {
  return guarded([&] {
    need(p_out, "p_out");
    const pcs::ProjectionResult r =
        pcs::project(view(q, n, "q"), view(a, n, "a"), power, from_c(deref(opt, "opt")));
    std::copy(r.p.begin(), r.p.end(), p_out);
    if (lambda != nullptr) *lambda = r.lambda;
    if (nu != nullptr) *nu = r.nu;
  });
}

pcs_status pcs_optimize(const pcs_constellation* c, const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                        const pcs_optimizer_config* opt, const double* start, size_t n,
                        pcs_iteration_callback callback, void* user, pcs_trace** out) {
  return guarded([&] {
    const auto& cc = deref(c, "constellation").value;
    need(out, "out");
    pcs::SymbolDistribution p0 = pcs::SymbolDistribution::uniform(cc.order());
    if (start != nullptr) {
      require_size(n, cc.order(), "start");
      p0 = pcs::SymbolDistribution(std::vector<double>(start, start + n));
    }
    pcs::IterationObserver observer;
    if (callback != nullptr) {
      observer = [callback, user](const pcs::IterationEvent& e) {
        callback(e.iteration, e.capacity, e.step_norm, e.projection_seconds, user);
      };
    }
    auto trace = std::make_unique<pcs_trace>(pcs_trace{
        pcs::optimize(cc, from_c(deref(cfg, "cfg")), from_c(deref(sp, "sp")), from_c(deref(opt, "opt")), p0, observer)});
    *out = trace.release();
  });
}

void pcs_trace_destroy(pcs_trace* t) { delete t; }
int pcs_trace_iterations(const pcs_trace* t) { return t == nullptr ? 0 : t->value.iterations; }
int pcs_trace_converged(const pcs_trace* t) { return t != nullptr && t->value.converged ? 1 : 0; }
double pcs_trace_final_capacity(const pcs_trace* t) { return t == nullptr ? 0.0 : t->value.final_capacity; }
size_t pcs_trace_capacity_count(const pcs_trace* t) { return t == nullptr ? 0 : t->value.capacities.size(); }
double pcs_trace_capacity(const pcs_trace* t, size_t k) {
  return t == nullptr || k >= t->value.capacities.size() ? 0.0 : t->value.capacities[k];
}
size_t pcs_trace_step_count(const pcs_trace* t) { return t == nullptr ? 0 : t->value.step_norms.size(); }
double pcs_trace_step_norm(const pcs_trace* t, size_t k) {
  return t == nullptr || k >= t->value.step_norms.size() ? 0.0 : t->value.step_norms[k];
}
double pcs_trace_projection_seconds(const pcs_trace* t, size_t k) {
  return t == nullptr || k >= t->value.projection_seconds.size() ? 0.0 : t->value.projection_seconds[k];
}

pcs_status pcs_trace_distribution(const pcs_trace* t, double* out, size_t n) {
  return guarded([&] {
    const auto probs = deref(t, "trace").value.final_distribution.probs();
    need(out, "out");
    require_size(n, static_cast<int>(probs.size()), "distribution buffer");
    std::copy(probs.begin(), probs.end(), out);
  });
}

pcs_status pcs_capacity_sweep(const pcs_constellation* c, const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                              const double* eb_n0_grid, size_t n_points, const pcs_optimizer_config* opt,
                              int restarts, uint64_t seed, pcs_sweep** out) {
  return guarded([&] {
    need(out, "out");
    pcs::SweepOptions options;
    options.restarts = restarts;
    options.seed = seed;
    auto sweep = std::make_unique<pcs_sweep>(pcs_sweep{pcs::capacity_sweep(
        deref(c, "constellation").value, from_c(deref(cfg, "cfg")), from_c(deref(sp, "sp")),
        view(eb_n0_grid, n_points, "eb_n0_grid"), from_c(deref(opt, "opt")), options)});
    *out = sweep.release();
  });
}

void pcs_sweep_destroy(pcs_sweep* s) { delete s; }
size_t pcs_sweep_size(const pcs_sweep* s) { return s == nullptr ? 0 : s->value.size(); }

pcs_status pcs_sweep_point_at(const pcs_sweep* s, size_t i, pcs_sweep_point* out) {
  return guarded([&] {
    const auto& v = deref(s, "sweep").value;
    need(out, "out");
    if (i >= v.size()) pcs::throw_invalid("sweep index out of range");
    const auto& pt = v[i];
    *out = {pt.eb_n0_db,          pt.power_budget,     pt.capacity_uniform, pt.capacity_shaped,
            to_c(pt.clip_stats_uniform), to_c(pt.clip_stats), pt.iterations,      pt.converged ? 1 : 0};
  });
}

pcs_status pcs_sweep_distribution(const pcs_sweep* s, size_t i, double* out, size_t n) {
  return guarded([&] {
    const auto& v = deref(s, "sweep").value;
    need(out, "out");
    if (i >= v.size()) pcs::throw_invalid("sweep index out of range");
    const auto probs = v[i].distribution.probs();
    require_size(n, static_cast<int>(probs.size()), "distribution buffer");
    std::copy(probs.begin(), probs.end(), out);
  });
}

pcs_status pcs_convergence_study(const pcs_constellation* c, const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                                 const pcs_optimizer_config* opt, double eb_n0_db, int n_starts, uint64_t seed,
                                 pcs_convergence** out) {
  return guarded([&] {
    need(out, "out");
    auto study = std::make_unique<pcs_convergence>(pcs_convergence{
        pcs::convergence_study(deref(c, "constellation").value, from_c(deref(cfg, "cfg")), from_c(deref(sp, "sp")),
                               from_c(deref(opt, "opt")), eb_n0_db, n_starts, seed)});
    *out = study.release();
  });
}

void pcs_convergence_destroy(pcs_convergence* s) { delete s; }
int pcs_convergence_starts(const pcs_convergence* s) {
  return s == nullptr ? 0 : static_cast<int>(s->value.iterations.size());
}
int pcs_convergence_iterations(const pcs_convergence* s, int start) {
  if (s == nullptr || start < 0 || static_cast<std::size_t>(start) >= s->value.iterations.size()) return 0;
  return s->value.iterations[static_cast<std::size_t>(start)];
}
int pcs_convergence_converged(const pcs_convergence* s, int start) {
  if (s == nullptr || start < 0 || static_cast<std::size_t>(start) >= s->value.converged.size()) return 0;
  return s->value.converged[static_cast<std::size_t>(start)] ? 1 : 0;
}
size_t pcs_convergence_length(const pcs_convergence* s) { return s == nullptr ? 0 : s->value.mean_capacity.size(); }
double pcs_convergence_mean_capacity(const pcs_convergence* s, size_t k) {
  return s == nullptr || k >= s->value.mean_capacity.size() ? 0.0 : s->value.mean_capacity[k];
}
double pcs_convergence_mean_iterations(const pcs_convergence* s) { return s == nullptr ? 0.0 : s->value.mean_iterations; }
double pcs_convergence_mean_projection_seconds(const pcs_convergence* s) {
  return s == nullptr ? 0.0 : s->value.mean_projection_seconds;
}

pcs_status pcs_papr_ccdf(const pcs_constellation* c, pcs_pcs_source source, const pcs_ofdm_config* cfg,
                         long long n_frames, int n_distributions, const double* thresholds_db, size_t n_thresholds,
                         uint64_t seed, pcs_ccdf_averaging averaging, double* exceed_out) {
  return guarded([&] {
    need(exceed_out, "exceed_out");
    if (source != PCS_SOURCE_UNIFORM && source != PCS_SOURCE_RANDOM_PCS) pcs::throw_invalid("unknown PCS source");
    const pcs::CcdfCurve curve = pcs::papr_ccdf(
        deref(c, "constellation").value, source == PCS_SOURCE_UNIFORM ? pcs::PcsSource::uniform : pcs::PcsSource::random_pcs,
        from_c(deref(cfg, "cfg")), n_frames, n_distributions, view(thresholds_db, n_thresholds, "thresholds_db"), seed,
        averaging == PCS_CCDF_POOLED ? pcs::CcdfAveraging::pooled : pcs::CcdfAveraging::per_threshold);
    std::copy(curve.exceed_prob.begin(), curve.exceed_prob.end(), exceed_out);
  });
}

pcs_status pcs_empirical_bussgang(double sigma_x, double alpha, double beta, long long n_samples, uint64_t seed,
                                  double* r_hat, double* var_hat, double* residual_correlation) {
  return guarded([&] {
    const pcs::BussgangEstimate e = pcs::empirical_bussgang(sigma_x, alpha, beta, n_samples, seed);
    if (r_hat != nullptr) *r_hat = e.r_hat;
    if (var_hat != nullptr) *var_hat = e.var_hat;
    if (residual_correlation != nullptr) *residual_correlation = e.residual_correlation;
  });
}

pcs_status pcs_mc_mutual_information(const pcs_constellation* c, const double* p, size_t n, const pcs_clip_stats* clip,
                                     const pcs_system_params* sp, long long n_samples, uint64_t seed, double* bits,
                                     double* std_error) {
  return guarded([&] {
    const auto& cc = deref(c, "constellation").value;
    const auto& cs = deref(clip, "clip");
    require_size(n, cc.order(), "distribution");
    const pcs::ClipStats stats{cs.sigma_x, cs.alpha, cs.beta, cs.r_factor, cs.clip_noise_var};
    const pcs::SubchannelModel model = pcs::make_subchannel(cc, stats, from_c(deref(sp, "sp")));
    const pcs::MonteCarloEstimate e = pcs::mc_mutual_information(view(p, n, "p"), model, n_samples, seed);
    if (bits != nullptr) *bits = e.bits;
    if (std_error != nullptr) *std_error = e.std_error;
  });
}

void pcs_validate_options_default(pcs_validate_options* out) {
  if (out == nullptr) return;
  *out = {1000000, 5, 20, 1000000, 1000, pcs::kDefaultQuadratureNodes, 1};
}

pcs_status pcs_validate(const pcs_validate_options* options, const pcs_ofdm_config* cfg, const pcs_system_params* sp,
                        char** json_out, int* all_passed) {
  return guarded([&] {
    const auto& o = deref(options, "options");
    need(json_out, "json_out");
    const pcs::OfdmConfig ofdm = from_c(deref(cfg, "cfg"));
    const pcs::SystemParams params = from_c(deref(sp, "sp"));
    ofdm.validate();
    params.validate();
    using nlohmann::json;
    namespace v = pcs::validation;

    const v::BussgangSuite bs = v::run_bussgang_suite(o.bussgang_samples, pcs::derive_seed(o.seed, 1), o.bussgang_grid);
    json bcases = json::array();
    for (const auto& c : bs.cases) {
      bcases.push_back({{"alpha", c.alpha},
                        {"beta", c.beta},
                        {"r_analytic", c.r_analytic},
                        {"r_empirical", c.r_empirical},
                        {"var_analytic", c.var_analytic},
                        {"var_empirical", c.var_empirical},
                        {"var_unnormalized_phi", c.var_unnormalized_phi},
                        {"passed", c.passed}});
    }

    const v::CapacitySuite cs = v::run_capacity_suite(o.capacity_instances, o.capacity_samples,
                                                      pcs::derive_seed(o.seed, 2), ofdm, params, o.quadrature_nodes);
    json ccases = json::array();
    for (const auto& c : cs.cases) {
      ccases.push_back({{"kind", c.kind},
                        {"order", c.order},
                        {"eb_n0_db", c.eb_n0_db},
                        {"quadrature_bits", c.quadrature_bits},
                        {"monte_carlo_bits", c.monte_carlo_bits},
                        {"monte_carlo_std_error", c.monte_carlo_std_error},
                        {"passed", c.passed}});
    }

    const v::ProjectionSuite ps = v::run_projection_suite(o.projection_instances, pcs::derive_seed(o.seed, 3));

    const bool ok = bs.passed && cs.passed && ps.passed;
    const json report = {
        {"passed", ok},
        {"bussgang",
         {{"samples", bs.samples},
          {"gain_tolerance", bs.gain_tolerance},
          {"variance_tolerance", bs.variance_tolerance},
          {"unnormalized_phi_rejected", bs.unnormalized_phi_rejected},
          {"passed", bs.passed},
          {"cases", bcases}}},
        {"capacity",
         {{"samples", cs.samples}, {"tolerance", cs.tolerance}, {"passed", cs.passed}, {"cases", ccases}}},
        {"projection",
         {{"instances", ps.instances},
          {"max_inf_error", ps.max_inf_error},
          {"max_constraint_violation", ps.max_constraint_violation},
          {"error_tolerance", ps.error_tolerance},
          {"constraint_tolerance", ps.constraint_tolerance},
          {"failures", ps.failures},
          {"passed", ps.passed}}}};
    *json_out = copy_string(report.dump(2));
    if (all_passed != nullptr) *all_passed = ok ? 1 : 0;
  });
}

}  // extern "C"
