#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchlab/ot/flow.hpp"
#include "matchlab/ot/geometric_cost.hpp"
#include "matchlab/ot/measure.hpp"

namespace matchlab::ot {

inline void require_equal_mass(double a, double b, const char* what) {
  if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}))
    throw std::invalid_argument(std::string(what) + ": unequal total masses");
}

/// Exact W_p^p on the line via the monotone (quantile) coupling.
inline double w1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  if (mu.dim != 1 || nu.dim != 1) throw std::invalid_argument("w1d: measures must be one-dimensional");
  require_equal_mass(mu.total(), nu.total(), "w1d");
  auto sorted = [](const DiscreteMeasure& m) {
    std::vector<std::size_t> idx(m.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return m.points[a] < m.points[b]; });
    return idx;
  };
  const auto ia = sorted(mu), ib = sorted(nu);
  std::size_t a = 0, b = 0;
  double ra = ia.empty() ? 0.0 : mu.weights[ia[0]], rb = ib.empty() ? 0.0 : nu.weights[ib[0]];
  double cost = 0.0;
  while (a < ia.size() && b < ib.size()) {
    const double m = std::min(ra, rb);
    cost += m * power(std::abs(mu.points[ia[a]] - nu.points[ib[b]]), p);
    ra -= m;
    rb -= m;
    if (ra <= 0.0 && ++a < ia.size()) ra = mu.weights[ia[a]];
    if (rb <= 0.0 && ++b < ib.size()) rb = nu.weights[ib[b]];
  }
  return cost;
}

struct Assignment {
  double cost = 0.0;
  std::vector<std::int32_t> perm;  // perm[i] = target matched to source i
};

/// Hungarian algorithm (shortest augmenting paths with potentials), O(n^3).
inline Assignment assignment_from_costs(std::size_t n, std::span<const double> c) {
  if (c.size() != n * n) throw std::invalid_argument("assignment: cost matrix must be n x n");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);  // match[j] = row assigned to column j (1-based)
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) minv[j] = cur, way[j] = j0;
        if (minv[j] < delta) delta = minv[j], j1 = j;
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment out;
  out.perm.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) out.perm[match[j] - 1] = static_cast<std::int32_t>(j - 1);
  for (std::size_t i = 0; i < n; ++i) out.cost += c[i * n + static_cast<std::size_t>(out.perm[i])];
  return out;
}

/// min over permutations of sum |x_i - y_sigma(i)|^p.
inline Assignment assignment_cost(std::span<const double> x, std::span<const double> y, int dim, double p) {
  if (x.size() != y.size() || x.size() % static_cast<std::size_t>(dim) != 0)
    throw std::invalid_argument("assignment_cost: point sets must have equal size");
  const std::size_t n = x.size() / static_cast<std::size_t>(dim);
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) {
        const double t = x[i * dim + k] - y[j * dim + k];
        s += t * t;
      }
      c[i * n + j] = power(std::sqrt(s), p);
    }
  return assignment_from_costs(n, c);
}

struct WpResult {
  double cost = 0.0;
  TransportPlan plan;
  SolveStats stats;
};

namespace detail {
inline void cap_check(std::size_t n, std::size_t m, std::size_t max_atoms) {
  if (n + m > max_atoms) throw std::length_error("transport instance exceeds the solver size cap");
}
}  // namespace detail

inline constexpr std::size_t default_atom_cap = 250000;

/// Exact W_p^p between two weighted point clouds.
inline WpResult wp(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, Metric metric = Metric::euclidean,
                   std::size_t atom_cap = default_atom_cap) {
  if (mu.dim != nu.dim) throw std::invalid_argument("wp: dimension mismatch");
  require_equal_mass(mu.total(), nu.total(), "wp");
  detail::cap_check(mu.size(), nu.size(), atom_cap);
  WpResult out;
  if (mu.empty() || nu.empty()) return out;
  GeometricCostModel model(mu.points, nu.points, mu.dim, p, metric);
  model.set_mass_ratio((mu.total() / static_cast<double>(mu.size())) / (nu.total() / static_cast<double>(nu.size())));
  const auto res = solve_transport(mu.weights, nu.weights, model, &out.stats);
  for (const auto& a : res.plan) {
    if (a.mass <= 0.0) continue;
    out.plan.arcs.push_back({a.source, a.target, a.mass, {}});
    out.cost += a.mass * model.cost(a.source, a.target);
  }
  out.plan.cost = out.cost;
  return out;
}

/// Exact boundary transport Wb^p on a box or ball: atoms may also be sent to,
/// or fed from, their nearest boundary point. Totals may differ.
inline WpResult wb(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, const Domain& domain,
                   std::size_t atom_cap = default_atom_cap) {
  if (mu.dim != nu.dim || mu.dim != domain.dim()) throw std::invalid_argument("wb: dimension mismatch");
  detail::cap_check(mu.size(), nu.size(), atom_cap);
  std::vector<double> ds(mu.size()), dt(nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!domain.contains(mu.point(i))) throw std::domain_error("wb: source atom outside the domain");
    ds[i] = domain.boundary_distance(mu.point(i));
  }
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (!domain.contains(nu.point(j))) throw std::domain_error("wb: target atom outside the domain");
    dt[j] = domain.boundary_distance(nu.point(j));
  }
  WpResult out;
  const double tm = mu.total(), tn = nu.total();
  if (mu.empty() && nu.empty()) return out;
  std::vector<double> supply(mu.weights);
  supply.push_back(tn);
  std::vector<double> demand(nu.weights);
  demand.push_back(tm);
  if (mu.empty() || nu.empty()) {
    // Everything goes through the boundary.
    const auto& m = mu.empty() ? nu : mu;
    const auto& d = mu.empty() ? dt : ds;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double c = m.weights[i] * power(d[i], p);
      out.cost += c;
      const auto bp = domain.nearest_boundary_point(m.point(i));
      if (mu.empty()) out.plan.arcs.push_back({-1, static_cast<std::int32_t>(i), m.weights[i], bp});
      else out.plan.arcs.push_back({static_cast<std::int32_t>(i), -1, m.weights[i], bp});
    }
    out.plan.cost = out.cost;
    return out;
  }
  GeometricCostModel model(mu.points, nu.points, mu.dim, p);
  model.set_boundary(ds, dt);
  const auto res = solve_transport(supply, demand, model, &out.stats);
  const auto n = static_cast<std::int32_t>(mu.size());
  const auto m = static_cast<std::int32_t>(nu.size());
  for (const auto& a : res.plan) {
    if (a.mass <= 0.0 || (a.source == n && a.target == m)) continue;
    PlanEntry e{a.source == n ? -1 : a.source, a.target == m ? -1 : a.target, a.mass, {}};
    if (e.source < 0) e.boundary_point = domain.nearest_boundary_point(nu.point(static_cast<std::size_t>(e.target)));
    if (e.target < 0) e.boundary_point = domain.nearest_boundary_point(mu.point(static_cast<std::size_t>(e.source)));
    out.cost += a.mass * model.cost(a.source, a.target);
    out.plan.arcs.push_back(std::move(e));
  }
  out.plan.cost = out.cost;
  return out;
}

/// Cost of T(x) = min((M/m) x, L) moving density M on (0, L) onto density m
/// (M = max, m = min of the two), the excess going to the endpoint L.
inline double change_map_cost(double m1, double m2, double L, double p) {
  if (!(m1 > 0.0 && m2 > 0.0 && L > 0.0)) throw std::invalid_argument("change_map_cost: need positive data");
  const double big = std::max(m1, m2), small = std::min(m1, m2);
  if (big == small) return 0.0;
  const double split = small / big * L;
  const double moved = big * std::pow(big / small - 1.0, p) * std::pow(split, p + 1.0) / (p + 1.0);
  const double dumped = big * std::pow(L - split, p + 1.0) / (p + 1.0);
  return moved + dumped;
}

}  // namespace matchlab::ot
