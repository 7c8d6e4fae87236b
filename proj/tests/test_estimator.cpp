#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "matchlab/estimator/cost.hpp"
#include "matchlab/estimator/decomposition.hpp"
#include "matchlab/ot/solvers.hpp"

using namespace matchlab;
using namespace matchlab::estimator;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("fit recovers an exact power law") {
  const std::vector<double> ns{100, 200, 400, 800};
  std::vector<std::vector<double>> costs;
  for (const double n : ns) costs.push_back({3.0 * std::pow(n, 0.5) * 0.9, 3.0 * std::pow(n, 0.5) * 1.1});
  const auto f = fit_costs(ns, costs, [](double n) { return std::sqrt(n); });
  CHECK_THAT(f.exponent, WithinAbs(0.5, 1e-12));
  CHECK_THAT(f.prefactor, WithinRel(3.0, 1e-12));
  CHECK_THAT(f.band, WithinRel(1.0, 1e-12));
  CHECK(f.monotone);
  const auto one = fit_costs({100.0}, {{1.0, 2.0}}, [](double) { return 1.0; });
  CHECK(std::isnan(one.exponent));
}

TEST_CASE("monotone within one standard error") {
  CHECK(monotone_within_se({1.0, 0.95, 1.2}, {0.1, 0.1, 0.1}));
  CHECK_FALSE(monotone_within_se({1.0, 0.5}, {0.1, 0.1}));
}

TEST_CASE("replicates are reproducible and independent of the thread count") {
  const LawSpec spec{"gaussian", 2, 2.0, 1.0};
  CostOptions one, four;
  four.jobs = 4;
  const auto a = estimate_cost(spec, 150, 2.0, 4, 77, one);
  const auto b = estimate_cost(spec, 150, 2.0, 4, 77, four);
  for (std::size_t k = 0; k < 4; ++k) CHECK(a[k].cost == b[k].cost);
  CHECK(a[0].cost != a[1].cost);
  CostOptions tail;
  tail.first_replicate = 2;
  const auto c = estimate_cost(spec, 150, 2.0, 2, 77, tail);
  CHECK(c[0].cost == a[2].cost);
  CHECK(c[1].replicate == 3);
}

TEST_CASE("records carry the predictions") {
  const LawSpec spec{"power", 3, 3.0, 1.0};
  const auto r = estimate_cost(spec, 100, 1.0, 1, 5)[0];
  CHECK(r.q == 3.0);
  CHECK(r.predicted.tau == tau(100.0, 1.0, 3, 3.0));
  CHECK(r.error_radius > 0.0);
  CHECK(r.flagged == (r.error_radius > 0.05 * r.cost));
}

TEST_CASE("caps and input validation") {
  const LawSpec spec{"gaussian", 2, 2.0, 1.0};
  CHECK_THROWS_AS(estimate_cost(spec, 40000, 2.0, 1, 1), CapError);
  CostOptions opt;
  opt.atoms = 10;
  CHECK_THROWS_AS(estimate_cost(spec, 100, 2.0, 1, 1, opt), std::invalid_argument);
  CHECK_THROWS_AS(rate_sweep(spec, 2.0, {100, 200}, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(concentration_check(spec, {100}, 2.0, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(concentration_check(spec, {100}, 3.0, 64, 1), std::invalid_argument);
  CHECK_THROWS_AS((LawSpec{"cauchy", 2, 2.0, 1.0}.potential()), std::invalid_argument);
}

TEST_CASE("Young constant") {
  CHECK(young_constant(1.0, 0.3) == 1.0);
  // p = 2: (a + b)^2 <= (1 + e) a^2 + (1 + 1/e) b^2
  CHECK_THAT(young_constant(2.0, 0.25), WithinRel(5.0, 1e-14));
  // tight at the optimal ratio b / a
  const double p = 3.0, e = 0.2, c = young_constant(p, e);
  double worst = -1.0;
  for (int k = 1; k < 4000; ++k) {
    const double b = k * 1e-3;
    worst = std::max(worst, std::pow(1.0 + b, p) - (1.0 + e) - c * std::pow(b, p));
  }
  CHECK(worst <= 1e-12);
  CHECK(worst > -1e-4);
}

TEST_CASE("local-global split on a small sample") {
  const LawSpec spec{"gaussian", 2, 2.0, 1.0};
  const auto s = local_global_split(spec, 120, 2.0, 0.5, 4, 3);
  CHECK(s.holds);
  CHECK(s.local > 0.0);
  CHECK(s.global >= 0.0);
  CHECK(s.young == young_constant(2.0, 0.5));
}

TEST_CASE("radial split: transport below the flux bound times p^p") {
  const LawSpec spec{"gaussian", 3, 2.0, 1.0};
  const auto r = radial_split_check(spec, 2000, 2.0, 0.1, 9);
  CHECK(r.cost <= 4.0 * r.bound);
  // p = 1 is the equality case
  const auto r1 = radial_split_check(spec, 2000, 1.0, 0.1, 9);
  CHECK_THAT(r1.cost, WithinRel(r1.bound, 1e-7));
  double n = 0.0;
  for (const double c : r.counts) n += c;
  CHECK(n == 2000.0);
  CHECK(r.type.c_minus > 0.0);
  CHECK(std::isfinite(r.type.c_plus));
}

TEST_CASE("sphere atoms are unit vectors, one per cell") {
  const auto a = sphere_atoms(3, 50);
  CHECK(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = std::hypot(a.points[3 * i], a.points[3 * i + 1], a.points[3 * i + 2]);
    CHECK_THAT(r, WithinAbs(1.0, 1e-12));
  }
  const auto s = sphere_projection_cost(LawSpec{"gaussian", 2, 2.0, 1.0}, 60, 1.0, 3, 2);
  CHECK(s.costs.size() == 3);
  CHECK(s.eta == eta(60.0, 1.0, 1));
}

namespace {
// W1 on the unit circle between unit atoms at angles a and b: min_c int |G - c|
// with G the difference of the angular CDFs.
double circle_w1(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::pair<double, double>> ev;
  for (const double x : a) ev.emplace_back(x, 1.0);
  for (const double x : b) ev.emplace_back(x, -1.0);
  std::sort(ev.begin(), ev.end());
  std::vector<std::pair<double, double>> seg;  // (G, length)
  double g = 0.0, prev = 0.0;
  for (const auto& [x, w] : ev) {
    seg.emplace_back(g, x - prev);
    g += w;
    prev = x;
  }
  seg.emplace_back(g, 2.0 * std::numbers::pi - prev);
  auto sorted = seg;
  std::sort(sorted.begin(), sorted.end());
  double acc = 0.0, c = 0.0;
  for (const auto& [v, len] : sorted) {
    acc += len;
    if (acc >= std::numbers::pi) {
      c = v;
      break;
    }
  }
  double w = 0.0;
  for (const auto& [v, len] : seg) w += std::abs(v - c) * len;
  return w;
}
double angle(double x, double y) {
  const double t = std::atan2(y, x);
  return t < 0.0 ? t + 2.0 * std::numbers::pi : t;
}
}  // namespace

TEST_CASE("geodesic W1 on the circle matches the closed form") {
  const std::size_t n = 200;
  const auto target = sphere_atoms(2, n);
  auto rng = make_rng(31);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> pts, a, b;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = 2.0 * std::numbers::pi * uniform_open(rng);
      pts.push_back(std::cos(t));
      pts.push_back(std::sin(t));
      a.push_back(t);
      b.push_back(angle(target.points[2 * i], target.points[2 * i + 1]));
    }
    const auto lp = ot::wp(ot::DiscreteMeasure::unit(2, pts), target, 1.0, ot::Metric::geodesic).cost;
    CHECK_THAT(lp, WithinRel(circle_w1(a, b), 1e-9));
  }
}

TEST_CASE("cube lower bound chain") {
  const LawSpec spec{"gaussian", 2, 2.0, 1.0};
  CHECK(cubes_in_ball(2, 1.0, 1.5).size() == 4);
  const auto lb = lower_bound_cells(spec, 300, 2.0, 0.75, 1.5, 6);
  CHECK(lb.chain_holds);
  CHECK(lb.sum <= lb.union_cost * (1.0 + 1e-8));
  CHECK(lb.union_cost <= lb.direct * (1.0 + 1e-8));
}

TEST_CASE("cube constants are positive and ordered") {
  const auto c = constant_cube(2.0, 2, {200.0, 400.0}, 3, 12);
  for (std::size_t k = 0; k < 2; ++k) CHECK(c.lower.ratio[k] <= c.upper.ratio[k]);
  CHECK(c.records.size() == 12);
}
