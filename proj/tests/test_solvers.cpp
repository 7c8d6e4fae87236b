#include <catch_amalgamated.hpp>

#include <cmath>

#include "matchlab/estimator/properties.hpp"
#include "matchlab/ot/solvers.hpp"

using namespace matchlab;
using namespace matchlab::ot;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
DiscreteMeasure line(std::vector<double> x, std::vector<double> w) { return DiscreteMeasure(1, std::move(x), std::move(w)); }
}  // namespace

TEST_CASE("quantile coupling on the line") {
  const auto a = line({0.0, 1.0}, {1.0, 1.0});
  const auto b = line({1.5, 0.5}, {1.0, 1.0});
  CHECK_THAT(w1d(a, b, 2.0), WithinRel(0.5, 1e-15));
  CHECK_THAT(w1d(a, b, 1.0), WithinRel(1.0, 1e-15));
  // split mass: 2 at 0 against 1 at 1 and 1 at 3
  CHECK_THAT(w1d(line({0.0}, {2.0}), line({1.0, 3.0}, {1.0, 1.0}), 2.0), WithinRel(10.0, 1e-15));
  CHECK_THROWS_AS(w1d(a, line({0.0}, {1.0}), 2.0), std::invalid_argument);
}

TEST_CASE("assignment on a 3 x 3 hand instance") {
  const std::vector<double> c{4, 1, 3, 2, 0, 5, 3, 2, 2};
  CHECK(assignment_from_costs(3, c).cost == 5.0);
  CHECK_THAT(estimator::props::brute_assignment(3, c), WithinAbs(5.0, 0.0));
}

TEST_CASE("wp agrees with the line and with assignment") {
  auto rng = make_rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = estimator::props::random_measure(rng, 1, 30, 1.0, {-1.0}, {1.0});
    const auto b = estimator::props::random_measure(rng, 1, 45, 1.0, {0.0}, {3.0});
    for (const double p : {1.0, 2.0, 3.0}) CHECK_THAT(wp(a, b, p).cost, WithinRel(w1d(a, b, p), 1e-9));
  }
  std::vector<double> x(2 * 40), y(2 * 40);
  for (auto& v : x) v = uniform_open(rng);
  for (auto& v : y) v = uniform_open(rng);
  const auto ex = assignment_cost(x, y, 2, 2.0).cost;
  CHECK_THAT(wp(DiscreteMeasure::unit(2, x), DiscreteMeasure::unit(2, y), 2.0).cost, WithinRel(ex, 1e-9));
}

TEST_CASE("boundary transport on the unit interval") {
  // both atoms escape to the nearest wall: 0.1^2 + 0.1^2
  const auto mu = line({0.1}, {1.0});
  const auto nu = line({0.9}, {1.0});
  const auto dom = Domain::unit_cube(1);
  CHECK_THAT(wb(mu, nu, 2.0, dom).cost, WithinRel(0.02, 1e-12));
  CHECK_THAT(wp(mu, nu, 2.0).cost, WithinRel(0.64, 1e-12));
  // unequal masses are allowed: the surplus leaves through the wall
  CHECK_THAT(wb(line({0.5}, {2.0}), line({0.5}, {1.0}), 1.0, dom).cost, WithinRel(0.5, 1e-12));
}

TEST_CASE("geodesic cost on the circle") {
  const DiscreteMeasure a(2, {1.0, 0.0}, {1.0});
  const DiscreteMeasure b(2, {-1.0, 0.0}, {1.0});
  CHECK_THAT(wp(a, b, 1.0, Metric::geodesic).cost, WithinRel(std::numbers::pi, 1e-12));
  CHECK_THAT(wp(a, b, 1.0).cost, WithinRel(2.0, 1e-12));
}

TEST_CASE("density change map against its hand integral") {
  // T(x) = min(2x, 1) from density 1 onto density 1/2 on (0, 1)
  CHECK_THAT(change_map_cost(1.0, 0.5, 1.0, 1.0), WithinRel(0.25, 1e-15));
  CHECK_THAT(change_map_cost(1.0, 0.5, 1.0, 2.0), WithinRel(1.0 / 12.0, 1e-15));
  CHECK(change_map_cost(1.0, 1.0, 1.0, 2.0) == 0.0);
}

TEST_CASE("domains") {
  const auto ball = Domain::ball({0.0, 0.0}, 2.0);
  const double x[2] = {0.5, 0.0};
  CHECK_THAT(ball.boundary_distance(x), WithinAbs(1.5, 1e-15));
  const auto cubes = Domain::cubes(2, 0.5, {{0, 0, 0}, {1, 0, 0}});
  const double y[2] = {0.45, 0.1};
  CHECK(cubes.contains(y));
  CHECK_THAT(cubes.boundary_distance(y), WithinAbs(0.1, 1e-12));
  const double z[2] = {1.2, 0.1};
  CHECK_FALSE(cubes.contains(z));
}
