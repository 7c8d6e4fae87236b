#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "matchlab/density/truncate.hpp"
#include "matchlab/geometry/partition.hpp"
#include "matchlab/geometry/sectors.hpp"
#include "matchlab/geometry/shells.hpp"

using namespace matchlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("shell schedule recursion and termination") {
  const auto v = normalize(gaussian_potential(3));
  const auto s = build_radii(v, 0.1, 1e4, 2.0);
  REQUIRE(s.j_n() >= 2);
  CHECK(s.r1() == 1.0);
  for (std::size_t j = 1; j < s.r.size(); ++j) {
    CHECK_THAT(s.delta[j], WithinRel(0.1 / std::log(1e4), 1e-14));
    CHECK_THAT(s.r[j], WithinRel((1.0 + s.delta[j]) * s.r[j - 1], 1e-14));
  }
  CHECK(s.r_outer() >= s.r_bar);
  CHECK(s.r_prime() < s.r_bar);
  CHECK(s.shell_of(0.5) == 1);
  CHECK(s.shell_of(s.r[3]) == 5);
  CHECK(s.shell_of(0.5 * (s.r[3] + s.r[4])) == 5);
  CHECK(s.shell_of(2.0 * s.r_outer()) == 0);
}

TEST_CASE("radius-dependent widths in the plane for 1 <= p < 2") {
  const auto v = normalize(gaussian_potential(2));
  const auto s = build_radii(v, 0.2, 1e4, 1.5);
  CHECK(s.regime == DeltaRegime::radius_dependent);
  for (std::size_t j = 1; j < s.r.size(); ++j) CHECK_THAT(s.delta[j], WithinRel(0.2 * std::pow(s.r[j - 1], -2.0), 1e-14));
  CHECK_THROWS_AS(build_radii(v, 1.5, 1e4, 1.5), std::invalid_argument);
}

TEST_CASE("sphere partition cells have equal area") {
  for (const std::size_t k : {1ul, 7ul, 40ul}) {
    const SpherePartition sp(3, k);
    std::vector<double> count(k, 0.0);
    auto rng = make_rng(5, k);
    const std::size_t samples = 40000;
    std::vector<double> u(3);
    for (std::size_t s = 0; s < samples; ++s) {
      random_direction(rng, u);
      count[sp.cell_of(u)] += 1.0;
    }
    const double expect = static_cast<double>(samples) / static_cast<double>(k);
    for (const double c : count) CHECK(std::abs(c - expect) < 5.0 * std::sqrt(expect));
  }
  const SpherePartition circle(2, 8);
  const double a[2] = {std::cos(0.1), std::sin(0.1)};
  const auto arc = circle.longitude(circle.cell_of(a));
  CHECK_THAT(arc[1] - arc[0], WithinRel(2.0 * std::numbers::pi / 8.0, 1e-12));
}

TEST_CASE("exact partition tiles the truncated ball") {
  const auto base = std::make_shared<const RadialDensity>(normalize(gaussian_potential(2)));
  const auto tr = truncate(base, 0.1, 2.0, 500.0);
  const ExactPartition part(tr.schedule, 2, 6);
  double vol = 0.0, mass = 0.0;
  for (std::size_t c = 0; c < part.size(); ++c) {
    vol += part.volume(c);
    mass += part.mass(c, *tr.law);
  }
  const double R = tr.schedule.r_outer();
  CHECK_THAT(vol, WithinRel(std::numbers::pi * R * R, 1e-12));
  CHECK_THAT(mass, WithinRel(1.0, 1e-12));
  const double x[2] = {0.3, 0.2};
  CHECK(part.cell_of(x) == 0);
  const double far[2] = {2.0 * R, 0.0};
  CHECK(part.cell_of(far) == ExactPartition::npos);
}

TEST_CASE("sector probabilities") {
  // d = 2 has the closed form delta / (2 pi)
  const auto s2 = sigma_tilde(0.8, 2, 20000, 3);
  REQUIRE(s2.exact);
  CHECK(std::abs(s2.estimate - *s2.exact) < 4.0 * s2.se);
  CHECK(sigma_tilde(7.0, 3, 10, 1).estimate == 1.0);
  CHECK_THAT(cap_probability(3, std::numbers::pi / 2.0), WithinAbs(0.5, 1e-15));
  CHECK_THAT(cap_probability(2, 0.5), WithinRel(0.5 / std::numbers::pi, 1e-15));
}

TEST_CASE("frames are orthonormal") {
  auto rng = make_rng(9);
  const auto z = sample_frame(3, rng);
  double n = 0.0;
  for (const double v : z.y) n += v * v;
  CHECK_THAT(n, WithinAbs(1.0, 1e-12));
}

TEST_CASE("covering weight is one across shells") {
  const auto v = normalize(gaussian_potential(2));
  const auto s = build_radii(v, 0.1, 1e4, 2.0);
  for (const double r : {0.5, 1.5, 0.9 * s.r_outer()}) {
    const double x[2] = {r * std::cos(1.0), r * std::sin(1.0)};
    const auto w = covering_weight(x, s, 2000, 17);
    CHECK(std::abs(w.estimate - 1.0) <= 4.0 * w.se + 1e-12);
  }
  const double out[2] = {2.0 * s.r_outer(), 0.0};
  CHECK_THROWS_AS(covering_weight(out, s, 10, 1), std::domain_error);
}
