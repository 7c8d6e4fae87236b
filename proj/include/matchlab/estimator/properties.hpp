#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "matchlab/core/random.hpp"
#include "matchlab/density/truncate.hpp"
#include "matchlab/estimator/decomposition.hpp"
#include "matchlab/geometry/sectors.hpp"
#include "matchlab/ot/solvers.hpp"

namespace matchlab::estimator {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace props {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline ot::DiscreteMeasure random_measure(Rng& rng, int d, std::size_t k, double total, const std::vector<double>& lo,
                                          const std::vector<double>& hi) {
  ot::DiscreteMeasure m;
  m.dim = d;
  std::vector<double> x(static_cast<std::size_t>(d));
  double s = 0.0;
  std::vector<double> w(k);
  for (auto& v : w) s += (v = 0.2 + uniform_open(rng));
  for (std::size_t i = 0; i < k; ++i) {
    for (int t = 0; t < d; ++t) {
      const auto tt = static_cast<std::size_t>(t);
      x[tt] = lo[tt] + (hi[tt] - lo[tt]) * uniform_open(rng);
    }
    m.push(x, total * w[i] / s);
  }
  return m;
}

inline double brute_assignment(std::size_t n, const std::vector<double>& c) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += c[i * n + perm[i]];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace props

/// Hungarian vs factorial enumeration, and the LP vs the 1D quantile coupling.
inline std::vector<PropertyResult> check_solver_exactness(std::size_t instances, std::uint64_t seed) {
  auto rng = make_rng(seed, 1);
  double worst_assign = 0.0, worst_1d = 0.0;
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t n = 1 + t % 7;
    const int d = 1 + static_cast<int>(t % 3);
    const double p = t % 2 ? 1.0 : 2.0;
    std::vector<double> x(n * static_cast<std::size_t>(d)), y(x.size());
    for (auto& v : x) v = uniform_open(rng);
    for (auto& v : y) v = uniform_open(rng);
    const auto a = ot::assignment_cost(x, y, d, p);
    std::vector<double> c(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
          const double u = x[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)] - y[j * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)];
          s += u * u;
        }
        c[i * n + j] = ot::power(std::sqrt(s), p);
      }
    worst_assign = std::max(worst_assign, std::abs(a.cost - props::brute_assignment(n, c)));
  }
  for (std::size_t t = 0; t < instances; ++t) {
    const std::size_t n = 1 + t % 40, m = 1 + (t * 7) % 33;
    const double p = 1.0 + static_cast<double>(t % 3) * 0.5;
    auto mu = props::random_measure(rng, 1, n, 1.0, {0.0}, {1.0});
    auto nu = props::random_measure(rng, 1, m, 1.0, {0.0}, {1.0});
    const double ref = ot::w1d(mu, nu, p);
    const double lp = ot::wp(mu, nu, p).cost;
    worst_1d = std::max(worst_1d, std::abs(lp - ref) / std::max(ref, 1e-300));
  }
  return {{"assignment equals brute force", worst_assign <= 1e-9, "max abs error " + props::num(worst_assign)},
          {"wp equals 1D quantile coupling", worst_1d <= 1e-9, "max rel error " + props::num(worst_1d)}};
}

/// Subadditivity over balanced cells, superadditivity of Wb, Wb <= W, and the triangle inequality.
inline std::vector<PropertyResult> check_structure(std::size_t instances, std::uint64_t seed) {
  auto rng = make_rng(seed, 2);
  double worst_sub = 0.0, worst_super = 0.0, worst_wb = 0.0, worst_tri = 0.0;
  for (std::size_t t = 0; t < instances; ++t) {
    const int d = 1 + static_cast<int>(t % 2);
    const double p = t % 3 == 0 ? 1.0 : (t % 3 == 1 ? 2.0 : 1.5);
    // Cells: the unit cube cut at a random x-coordinate into two boxes, or 2x2 in d = 2.
    const double cut = 0.2 + 0.6 * uniform_open(rng);
    std::vector<std::pair<std::vector<double>, std::vector<double>>> cells;
    if (d == 1) {
      cells = {{{0.0}, {cut}}, {{cut}, {1.0}}};
    } else {
      const double cy = 0.2 + 0.6 * uniform_open(rng);
      cells = {{{0.0, 0.0}, {cut, cy}}, {{cut, 0.0}, {1.0, cy}}, {{0.0, cy}, {cut, 1.0}}, {{cut, cy}, {1.0, 1.0}}};
    }
    ot::DiscreteMeasure mu_all, nu_all, a_all, b_all;
    mu_all.dim = nu_all.dim = a_all.dim = b_all.dim = d;
    double sum_cells = 0.0, sum_wb = 0.0;
    for (const auto& [lo, hi] : cells) {
      const double mass = 0.5 + uniform_open(rng);
      const auto mu = props::random_measure(rng, d, 2 + t % 9, mass, lo, hi);
      const auto nu = props::random_measure(rng, d, 2 + (t * 5) % 11, mass, lo, hi);
      sum_cells += ot::wp(mu, nu, p).cost;
      for (std::size_t i = 0; i < mu.size(); ++i) mu_all.push(mu.point(i), mu.weights[i]);
      for (std::size_t i = 0; i < nu.size(); ++i) nu_all.push(nu.point(i), nu.weights[i]);
      // Unbalanced masses for the boundary problem.
      const auto a = props::random_measure(rng, d, 1 + t % 6, 0.3 + uniform_open(rng), lo, hi);
      const auto b = props::random_measure(rng, d, 1 + (t * 3) % 7, 0.3 + uniform_open(rng), lo, hi);
      sum_wb += ot::wb(a, b, p, ot::Domain::box(lo, hi)).cost;
      for (std::size_t i = 0; i < a.size(); ++i) a_all.push(a.point(i), a.weights[i]);
      for (std::size_t i = 0; i < b.size(); ++i) b_all.push(b.point(i), b.weights[i]);
    }
    const auto cube = ot::Domain::unit_cube(d);
    const double whole = ot::wp(mu_all, nu_all, p).cost;
    worst_sub = std::max(worst_sub, (whole - sum_cells) / std::max(sum_cells, 1e-300));
    const double wb_whole = ot::wb(a_all, b_all, p, cube).cost;
    worst_super = std::max(worst_super, (sum_wb - wb_whole) / std::max(wb_whole, 1e-300));
    const double wb_eq = ot::wb(mu_all, nu_all, p, cube).cost;
    worst_wb = std::max(worst_wb, (wb_eq - whole) / std::max(whole, 1e-300));
    // Triangle inequality for W_p^{1/p} on a random third measure of equal mass.
    const auto lam = props::random_measure(rng, d, 3 + t % 10, mu_all.total(), std::vector<double>(static_cast<std::size_t>(d), 0.0),
                                           std::vector<double>(static_cast<std::size_t>(d), 1.0));
    const double ab = std::pow(whole, 1.0 / p);
    const double ac = std::pow(ot::wp(mu_all, lam, p).cost, 1.0 / p);
    const double cb = std::pow(ot::wp(lam, nu_all, p).cost, 1.0 / p);
    worst_tri = std::max(worst_tri, ab - ac - cb);
  }
  return {{"subadditivity over balanced cells", worst_sub <= 1e-8, "max rel excess " + props::num(worst_sub)},
          {"superadditivity of Wb", worst_super <= 1e-8, "max rel excess " + props::num(worst_super)},
          {"Wb <= W on equal masses", worst_wb <= 1e-8, "max rel excess " + props::num(worst_wb)},
          {"triangle inequality of Wp", worst_tri <= 1e-8, "max excess " + props::num(worst_tri)}};
}

/// Slope of log Wb(1, 1 - gap) against log gap, per dimension and p.
struct ChangeCheck {
  int d = 1;
  double p = 1.0;
  std::size_t atoms_per_axis = 0;
  ChangeSweep sweep;
  bool passed = false;
};

inline std::vector<double> default_change_gaps() { return {0.2, 0.3, 0.45, 0.6}; }

inline ChangeCheck check_change(int d, double p, std::size_t k, const std::vector<double>& gaps = default_change_gaps()) {
  ChangeCheck c;
  c.d = d;
  c.p = p;
  c.atoms_per_axis = k;
  c.sweep = mass_change_sweep(d, p, k, gaps);
  c.passed = std::abs(c.sweep.fit.slope - p) <= 0.05;
  return c;
}

/// Covering weights at random points of B_{R_n} on a built schedule.
struct CoveringCheck {
  std::size_t points = 0;
  std::size_t within = 0;  // |estimate - 1| <= 4 se (or exact)
  double worst_z = 0.0;
  bool passed = false;
};

inline CoveringCheck check_covering(int d, double p, double n, std::size_t points, std::size_t frames,
                                    std::uint64_t seed) {
  const auto v = normalize(gaussian_potential(d));
  const auto s = build_radii(v, 0.1, n, p);
  auto rng = make_rng(seed, 3);
  CoveringCheck c;
  c.points = points;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < points; ++i) {
    // Uniform radius in (0, R_n), uniform direction.
    random_direction(rng, x);
    const double r = s.r_outer() * uniform_open(rng);
    for (auto& t : x) t *= r;
    const auto est = covering_weight(x, s, frames, stream_seed(seed, i));
    const double z = est.se > 0.0 ? std::abs(est.estimate - 1.0) / est.se : (est.estimate == 1.0 ? 0.0 : 1e300);
    c.worst_z = std::max(c.worst_z, z);
    if (z <= 4.0) ++c.within;
  }
  c.passed = c.within == c.points;
  return c;
}

}  // namespace matchlab::estimator
