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
#include "pcs/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pcs/error.hpp"
#include "pcs/parallel.hpp"
#include "pcs/rng.hpp"

namespace pcs {
namespace {

constexpr long long kFramesPerShard = 4096;
constexpr long long kSamplesPerShard = 1 << 16;

// Histogram of frames by how many thresholds their PAPR reaches.
class ExceedCounter {
 public:
  explicit ExceedCounter(std::span<const double> thresholds)
      : thresholds_(thresholds), bins_(thresholds.size() + 1, 0) {}

  void add(double papr_db) {
    const auto reached = std::upper_bound(thresholds_.begin(), thresholds_.end(), papr_db) - thresholds_.begin();
    ++bins_[static_cast<std::size_t>(reached)];
  }

  // counts[t] = frames with PAPR >= thresholds[t]
  std::vector<long long> counts() const {
    std::vector<long long> out(thresholds_.size(), 0);
    long long running = 0;
    for (std::size_t t = thresholds_.size(); t-- > 0;) {
      running += bins_[t + 1];
      out[t] = running;
    }
    return out;
  }

 private:
  std::span<const double> thresholds_;
  std::vector<long long> bins_;
};

// Draws frames of i.i.d. symbols and records their PAPR.
template <class SymbolDraw>
void count_frames(const Constellation& c, const OfdmConfig& cfg, long long frames, Engine& rng,
                  SymbolDraw&& draw, ExceedCounter& counter) {
  const auto pts = c.points();
  std::vector<std::complex<double>> data(static_cast<std::size_t>(cfg.data_subcarriers()));
  for (long long f = 0; f < frames; ++f) {
    for (auto& d : data) d = pts[draw(rng)];
    const TimeFrame t = synthesize(hermitian_load(data, cfg));
    counter.add(10.0 * std::log10(papr(t)));
  }
}

class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> p) : cdf_(p.size()) {
    std::partial_sum(p.begin(), p.end(), cdf_.begin());
  }
  std::size_t operator()(Engine& rng) {
    const double u = uniform_(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::string curve_label(const Constellation& c, PcsSource source, const OfdmConfig& cfg) {
  return std::to_string(c.order()) + "-" + (c.kind() == ConstellationKind::qam ? "QAM" : "PAM") + " " +
         to_string(source) + " N=" + std::to_string(cfg.n_subcarriers);
}

}  // namespace

const char* to_string(PcsSource source) { return source == PcsSource::uniform ? "uniform" : "random_pcs"; }

CcdfCurve papr_ccdf(const Constellation& c, PcsSource source, const OfdmConfig& cfg, long long n_frames,
                    int n_distributions, std::span<const double> thresholds_db, std::uint64_t seed,
                    CcdfAveraging averaging) {
  cfg.validate();
  require(n_frames >= 1000, "papr_ccdf needs at least 1000 frames");
  require(!thresholds_db.empty(), "papr_ccdf needs at least one threshold");
  for (std::size_t t = 1; t < thresholds_db.size(); ++t)
    require(thresholds_db[t] > thresholds_db[t - 1], "CCDF thresholds must be strictly increasing");

  CcdfCurve curve;
  curve.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
  curve.n_frames = n_frames;
  curve.label = curve_label(c, source, cfg);
  const std::size_t nt = thresholds_db.size();

  if (source == PcsSource::uniform) {
    const Constellation unit = c.scaled(1.0 / std::sqrt(c.mean_energy()));
    const long long shards = (n_frames + kFramesPerShard - 1) / kFramesPerShard;
    std::vector<std::vector<long long>> shard_counts(static_cast<std::size_t>(shards));
    parallel_for(static_cast<std::size_t>(shards), [&](std::size_t s) {
      Engine rng = substream(seed, s);
      const long long frames = std::min(kFramesPerShard, n_frames - static_cast<long long>(s) * kFramesPerShard);
      std::uniform_int_distribution<int> pick(0, unit.order() - 1);
      ExceedCounter counter(thresholds_db);
      count_frames(unit, cfg, frames, rng, [&](Engine& g) { return static_cast<std::size_t>(pick(g)); }, counter);
      shard_counts[s] = counter.counts();
    });
    curve.n_distributions = 0;
    curve.exceed_prob.assign(nt, 0.0);
    for (std::size_t t = 0; t < nt; ++t) {
      long long total = 0;
      for (const auto& sc : shard_counts) total += sc[t];
      curve.exceed_prob[t] = static_cast<double>(total) / static_cast<double>(n_frames);
    }
    return curve;
  }

  require(n_distributions >= 1, "random_pcs needs at least one distribution");
  curve.n_distributions = n_distributions;
  const std::uint64_t pcs_seed = derive_seed(seed, 0x5043);
  std::vector<std::vector<long long>> dist_counts(static_cast<std::size_t>(n_distributions));
  parallel_for(static_cast<std::size_t>(n_distributions), [&](std::size_t d) {
    Engine rng = substream(pcs_seed, d);
    const SymbolDistribution p = SymbolDistribution::random(c.order(), rng);
    const Constellation shaped = c.normalized_to(p.probs(), 1.0);
    CategoricalSampler sampler(p.probs());
    ExceedCounter counter(thresholds_db);
    count_frames(shaped, cfg, n_frames, rng, sampler, counter);
    dist_counts[d] = counter.counts();
  });

  curve.exceed_prob.assign(nt, 0.0);
  for (std::size_t t = 0; t < nt; ++t) {
    if (averaging == CcdfAveraging::per_threshold) {
      double acc = 0.0;
      for (const auto& dc : dist_counts) acc += static_cast<double>(dc[t]) / static_cast<double>(n_frames);
      curve.exceed_prob[t] = acc / n_distributions;
    } else {
      long long total = 0;
      for (const auto& dc : dist_counts) total += dc[t];
      curve.exceed_prob[t] = static_cast<double>(total) / (static_cast<double>(n_frames) * n_distributions);
    }
  }
  return curve;
}

BussgangEstimate empirical_bussgang(double sigma_x, double alpha, double beta, long long n_samples,
                                    std::uint64_t seed) {
  require(sigma_x > 0.0, "empirical_bussgang requires sigma_x > 0");
  require(alpha < beta, "empirical_bussgang requires alpha < beta");
  require(n_samples >= 100000, "empirical_bussgang needs at least 1e5 samples");

  struct Sums {
    double x = 0, xx = 0, c = 0, cc = 0, xc = 0;
  };
  const long long shards = (n_samples + kSamplesPerShard - 1) / kSamplesPerShard;
  std::vector<Sums> partial(static_cast<std::size_t>(shards));
  const double lo = alpha * sigma_x;
  const double hi = beta * sigma_x;
  parallel_for(static_cast<std::size_t>(shards), [&](std::size_t s) {
    Engine rng = substream(seed, s);
    std::normal_distribution<double> gauss(0.0, sigma_x);
    const long long count = std::min(kSamplesPerShard, n_samples - static_cast<long long>(s) * kSamplesPerShard);
    Sums acc;
    for (long long i = 0; i < count; ++i) {
      const double x = gauss(rng);
      const double c = std::clamp(x, lo, hi);
      acc.x += x;
      acc.xx += x * x;
      acc.c += c;
      acc.cc += c * c;
      acc.xc += x * c;
    }
    partial[s] = acc;
  });
  Sums t;
  for (const auto& p : partial) {
    t.x += p.x;
    t.xx += p.xx;
    t.c += p.c;
    t.cc += p.cc;
    t.xc += p.xc;
  }
  const double n = static_cast<double>(n_samples);

  BussgangEstimate est;
  est.r_hat = t.xc / t.xx;
  auto residual_variance = [&](double gain) {
    const double mean = (t.c - gain * t.x) / n;
    return (t.cc - 2.0 * gain * t.xc + gain * gain * t.xx) / n - mean * mean;
  };
  est.var_hat = residual_variance(est.r_hat);

  const double r = attenuation_factor(alpha, beta);
  const double mean_x = t.x / n;
  const double mean_e = (t.c - r * t.x) / n;
  const double cov = (t.xc - r * t.xx) / n - mean_e * mean_x;
  const double var_x = t.xx / n - mean_x * mean_x;
  const double var_e = residual_variance(r);
  est.residual_correlation = var_e > 0.0 ? cov / std::sqrt(var_e * var_x) : 0.0;
  return est;
}

MonteCarloEstimate mc_mutual_information(std::span<const double> p, const SubchannelModel& model,
                                         long long n_samples, std::uint64_t seed) {
  model.validate();
  require(p.size() == model.constellation.points().size(), "distribution size does not match constellation order");
  require(n_samples >= 100000, "mc_mutual_information needs at least 1e5 samples");

  constexpr long long kShard = 1 << 14;
  const long long shards = (n_samples + kShard - 1) / kShard;
  std::vector<std::pair<double, double>> partial(static_cast<std::size_t>(shards));
  const auto pts = model.constellation.points();
  const double per_dim_sd = std::sqrt(model.total_noise_var / 2.0);
  parallel_for(static_cast<std::size_t>(shards), [&](std::size_t s) {
    Engine rng = substream(seed, s);
    CategoricalSampler sampler(p);
    std::normal_distribution<double> noise(0.0, per_dim_sd);
    const long long count = std::min(kShard, n_samples - static_cast<long long>(s) * kShard);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long long i = 0; i < count; ++i) {
      const auto& x = pts[sampler(rng)];
      const double yr = model.effective_gain * x.real() + noise(rng);
      const double yi = model.effective_gain * x.imag() + noise(rng);
      const double v = -std::log2(std::max(mixture_pdf(yr, yi, p, model), 1e-300));
      sum += v;
      sum_sq += v * v;
    }
    partial[s] = {sum, sum_sq};
  });
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& [a, b] : partial) {
    sum += a;
    sum_sq += b;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean - noise_entropy(model), std::sqrt(var / n)};
}

OperatingPoint operating_point(const Constellation& c, double eb_n0_db, const OfdmConfig& cfg,
                               const SystemParams& sp, EbN0Reference ref) {
  const double power = power_for_eb_n0(eb_n0_db, c.order(), cfg, sp, ref);
  return {c.scaled(std::sqrt(power / c.mean_energy())), power};
}

namespace {

SymbolDistribution feasible_random_start(const Constellation& c, double power, const OptimizerConfig& opt,
                                         Engine& rng) {
  const SymbolDistribution draw = SymbolDistribution::random(c.order(), rng);
  ProjectionResult proj = project(draw.probs(), c.energies(), power, opt);
  const double sum = std::accumulate(proj.p.begin(), proj.p.end(), 0.0);
  for (auto& v : proj.p) v = std::clamp(v / sum, 0.0, 1.0);
  return SymbolDistribution(std::move(proj.p));
}

}  // namespace

std::vector<SweepPoint> capacity_sweep(const Constellation& c, const OfdmConfig& cfg, const SystemParams& sp,
                                       std::span<const double> eb_n0_grid, const OptimizerConfig& opt,
                                       const SweepOptions& options) {
  require(!eb_n0_grid.empty(), "capacity sweep needs a non-empty Eb/N0 grid");
  require(options.restarts >= 0, "restarts must be >= 0");
  std::vector<SweepPoint> out(eb_n0_grid.size());
  parallel_for(eb_n0_grid.size(), [&](std::size_t i) {
    const OperatingPoint op = operating_point(c, eb_n0_grid[i], cfg, sp, opt.eb_n0_reference);
    OptimizerConfig local = opt;
    local.power_budget = op.power_budget;
    const SymbolDistribution uniform = SymbolDistribution::uniform(c.order());

    SweepPoint pt;
    pt.eb_n0_db = eb_n0_grid[i];
    pt.power_budget = op.power_budget;
    const CapacityReport cu = capacity(uniform, op.constellation, cfg, sp, opt.quadrature_nodes, opt.eb_n0_reference);
    pt.capacity_uniform = cu.capacity_bits;
    pt.clip_stats_uniform = cu.clip;

    OptimizerTrace best = optimize(op.constellation, cfg, sp, local, uniform);
    for (int r = 0; r < options.restarts; ++r) {
      Engine rng = substream(options.seed, i * 4096 + static_cast<std::size_t>(r));
      const SymbolDistribution start = feasible_random_start(op.constellation, op.power_budget, local, rng);
      OptimizerTrace t = optimize(op.constellation, cfg, sp, local, start);
      if (t.final_capacity > best.final_capacity) best = std::move(t);
    }
    pt.capacity_shaped = best.final_capacity;
    pt.distribution = best.final_distribution;
    pt.clip_stats = clip_stats(op.constellation, pt.distribution, cfg, sp);
    pt.iterations = best.iterations;
    pt.converged = best.converged;
    out[i] = std::move(pt);
  });
  return out;
}

ConvergenceStudy convergence_study(const Constellation& c, const OfdmConfig& cfg, const SystemParams& sp,
                                   const OptimizerConfig& opt, double eb_n0_db, int n_starts,
                                   std::uint64_t seed) {
  require(n_starts >= 1, "convergence study needs at least one start");
  const OperatingPoint op = operating_point(c, eb_n0_db, cfg, sp, opt.eb_n0_reference);
  OptimizerConfig local = opt;
  local.power_budget = op.power_budget;

  std::vector<OptimizerTrace> traces(static_cast<std::size_t>(n_starts));
  parallel_for(traces.size(), [&](std::size_t s) {
    Engine rng = substream(seed, s);
    const SymbolDistribution start = feasible_random_start(op.constellation, op.power_budget, local, rng);
    traces[s] = optimize(op.constellation, cfg, sp, local, start);
  });

  ConvergenceStudy study;
  study.order = c.order();
  study.eb_n0_db = eb_n0_db;
  std::size_t longest = 0;
  double proj_time = 0.0;
  long long proj_calls = 0;
  for (const auto& t : traces) {
    study.iterations.push_back(t.iterations);
    study.converged.push_back(t.converged);
    longest = std::max(longest, t.capacities.size());
    for (double sec : t.projection_seconds) proj_time += sec;
    proj_calls += static_cast<long long>(t.projection_seconds.size());
  }
  study.mean_capacity.assign(longest, 0.0);
  for (std::size_t k = 0; k < longest; ++k) {
    double acc = 0.0;
    for (const auto& t : traces) acc += t.capacities[std::min(k, t.capacities.size() - 1)];
    study.mean_capacity[k] = acc / n_starts;
  }
  study.mean_iterations =
      std::accumulate(study.iterations.begin(), study.iterations.end(), 0.0) / static_cast<double>(n_starts);
  study.mean_projection_seconds = proj_calls > 0 ? proj_time / static_cast<double>(proj_calls) : 0.0;
  return study;
}

}  // namespace pcs
