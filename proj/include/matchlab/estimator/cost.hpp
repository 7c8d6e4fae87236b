#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "matchlab/core/parallel.hpp"
#include "matchlab/core/random.hpp"
#include "matchlab/estimator/records.hpp"
#include "matchlab/ot/semidiscrete.hpp"

namespace matchlab::estimator {

struct CostOptions {
  std::size_t atoms = 0;  // 0: 4 n
  double eps = 0.1;
  double flag_fraction = 0.05;
  std::size_t jobs = 1;
  std::size_t first_replicate = 0;  // replicates first .. first + reps - 1
  Caps caps;
};

/// Seed of replicate `rep` at sample size n.
inline Rng replicate_rng(std::uint64_t seed, std::size_t n, std::size_t rep) {
  return make_rng(stream_seed(seed, static_cast<std::uint64_t>(n)), rep);
}

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

/// reps independent replicates of W_p^p(mu_n, n rho) via semi-discrete quantization.
inline std::vector<ExperimentRecord> estimate_cost(const LawSpec& spec, std::size_t n, double p, std::size_t reps,
                                                   std::uint64_t seed, const CostOptions& opt = {}) {
  if (n == 0 || reps == 0) throw std::invalid_argument("estimate_cost: need n >= 1 and reps >= 1");
  if (!(p >= 1.0)) throw std::invalid_argument("estimate_cost: p must be at least 1");
  const std::size_t M = opt.atoms ? opt.atoms : 4 * n;
  require_cap(n, opt.caps.semidiscrete_n, "sample size");
  require_cap(M, opt.caps.atoms, "atom budget");
  if (M < n) throw std::invalid_argument("estimate_cost: atom budget below sample size");
  const auto law = spec.law();
  const auto quant = ot::quantize_radial(*law, M, p);
  const double q = spec.exponent();
  std::vector<ExperimentRecord> out(reps);
  parallel_for(reps, opt.jobs, [&](std::size_t k) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t r = opt.first_replicate + k;
    auto rng = replicate_rng(seed, n, r);
    const auto mu = ot::DiscreteMeasure::unit(spec.d, law->sample(n, rng));
    const auto res = ot::semidiscrete_cost(mu, quant);
    ExperimentRecord& rec = out[k];
    rec.law = spec;
    rec.d = spec.d;
    rec.p = p;
    rec.q = q;
    rec.n = n;
    rec.eps = opt.eps;
    rec.seed = seed;
    rec.replicate = r;
    rec.cost = res.cost;
    rec.predicted = predict(static_cast<double>(n), p, spec.d, q, opt.eps);
    rec.atoms = M;
    rec.error_radius = res.error_radius;
    rec.flagged = res.error_radius > opt.flag_fraction * res.cost;
    rec.wall_ms = elapsed_ms(t0);
  });
  return out;
}

inline std::vector<double> costs_of(const std::vector<ExperimentRecord>& recs) {
  std::vector<double> c;
  for (const auto& r : recs) c.push_back(r.cost);
  return c;
}

struct SweepResult {
  FitResult fit;
  std::vector<ExperimentRecord> records;
};

/// Cost against tau_n over an n grid.
inline SweepResult rate_sweep(const LawSpec& spec, double p, const std::vector<double>& n_grid, std::size_t reps,
                              std::uint64_t seed, const CostOptions& opt = {}) {
  if (n_grid.size() < 3) throw std::invalid_argument("rate_sweep: need at least three n values");
  for (std::size_t k = 0; k + 1 < n_grid.size(); ++k)
    if (!(n_grid[k + 1] > n_grid[k])) throw std::invalid_argument("rate_sweep: n grid must increase");
  SweepResult out;
  std::vector<std::vector<double>> costs;
  for (const double n : n_grid) {
    auto recs = estimate_cost(spec, static_cast<std::size_t>(n), p, reps, seed, opt);
    costs.push_back(costs_of(recs));
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  }
  const double q = spec.exponent();
  out.fit = fit_costs(n_grid, costs, [&](double n) { return tau(n, p, spec.d, q); });
  return out;
}

struct ConcentrationRow {
  std::size_t n = 0;
  double mean_ratio = 0.0;
  double sd_ratio = 0.0;  // sd of cost / tau_n
  double xi = 0.0;
  double sd_over_xi = 0.0;
};

struct ConcentrationResult {
  std::vector<ConcentrationRow> rows;
  std::vector<ExperimentRecord> records;
};

/// Spread of cost / tau_n per n, against the concentration scale xi_n.
inline ConcentrationResult concentration_check(const LawSpec& spec, const std::vector<double>& n_grid, double p,
                                               std::size_t reps, std::uint64_t seed, const CostOptions& opt = {}) {
  if (p > spec.d) throw std::invalid_argument("concentration_check: requires p <= d");
  if (reps < 64) throw std::invalid_argument("concentration_check: needs at least 64 replicates");
  ConcentrationResult out;
  const double q = spec.exponent();
  for (const double nn : n_grid) {
    const auto n = static_cast<std::size_t>(nn);
    auto recs = estimate_cost(spec, n, p, reps, seed, opt);
    std::vector<double> ratio;
    for (const auto& r : recs) ratio.push_back(r.cost / r.predicted.tau);
    const auto s = summarize(ratio);
    ConcentrationRow row;
    row.n = n;
    row.mean_ratio = s.mean;
    row.sd_ratio = s.sd;
    row.xi = xi(nn, p, spec.d, q, opt.eps);
    row.sd_over_xi = row.sd_ratio / row.xi;
    out.rows.push_back(row);
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  }
  return out;
}

struct CubeConstants {
  FitResult upper;  // W_p^p(mu_n, n) / eta_n
  FitResult lower;  // Wb^p(mu_n, n) / eta_n
  std::vector<ExperimentRecord> records;
  double spread = 0.0;  // max over n of (upper - lower) ratio
};

/// Ratios of the cube matching costs to eta_n, with and without boundary.
inline CubeConstants constant_cube(double p, int d, const std::vector<double>& n_grid, std::size_t reps,
                                   std::uint64_t seed, const CostOptions& opt = {}) {
  if (d != 2 && d != 3) throw std::invalid_argument("constant_cube: d must be 2 or 3");
  CubeConstants out;
  std::vector<std::vector<double>> up, lo;
  const auto domain = ot::Domain::unit_cube(d);
  for (const double nn : n_grid) {
    const auto n = static_cast<std::size_t>(nn);
    const std::size_t M = opt.atoms ? opt.atoms : 4 * n;
    require_cap(n, opt.caps.semidiscrete_n, "sample size");
    require_cap(M, opt.caps.atoms, "atom budget");
    const auto quant = ot::quantize_cube(d, M, p);
    std::vector<ExperimentRecord> recs(2 * reps);
    parallel_for(reps, opt.jobs, [&](std::size_t r) {
      auto rng = replicate_rng(seed, n, r);
      std::vector<double> pts(n * static_cast<std::size_t>(d));
      for (auto& x : pts) x = uniform_open(rng);
      const auto mu = ot::DiscreteMeasure::unit(d, pts);
      for (int which = 0; which < 2; ++which) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto res = which == 0 ? ot::semidiscrete_cost(mu, quant)
                                    : ot::semidiscrete_boundary_cost(mu, quant, domain, static_cast<double>(n));
        auto& rec = recs[2 * r + static_cast<std::size_t>(which)];
        rec.law = LawSpec{"uniform-cube", d, 0.0, 1.0};
        rec.d = d;
        rec.p = p;
        rec.n = n;
        rec.eps = opt.eps;
        rec.seed = seed;
        rec.replicate = r;
        rec.measure = which == 0 ? "wp" : "wb";
        rec.cost = res.cost;
        rec.predicted.eta = eta(nn, p, d);
        rec.predicted.tau = rec.predicted.eta;
        rec.predicted.known_prefactor = known_prefactor(p, d, 2.0, Target::cube);
        rec.atoms = quant.atoms.size();
        rec.error_radius = res.error_radius;
        rec.flagged = res.error_radius > opt.flag_fraction * res.cost;
        rec.wall_ms = elapsed_ms(t0);
      }
    });
    std::vector<double> cu, cl;
    for (std::size_t r = 0; r < reps; ++r) {
      cu.push_back(recs[2 * r].cost);
      cl.push_back(recs[2 * r + 1].cost);
    }
    up.push_back(cu);
    lo.push_back(cl);
    out.records.insert(out.records.end(), recs.begin(), recs.end());
  }
  auto rate = [&](double n) { return eta(n, p, d); };
  out.upper = fit_costs(n_grid, up, rate);
  out.lower = fit_costs(n_grid, lo, rate);
  for (std::size_t k = 0; k < n_grid.size(); ++k)
    out.spread = std::max(out.spread, out.upper.ratio[k] - out.lower.ratio[k]);
  return out;
}

}  // namespace matchlab::estimator
