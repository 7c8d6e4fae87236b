#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "matchlab/rates.hpp"

using namespace matchlab;
using Catch::Matchers::WithinRel;

TEST_CASE("eta on hand values") {
  CHECK_THAT(eta(1e4, 1.0, 3), WithinRel(std::pow(1e4, 2.0 / 3.0), 1e-14));
  CHECK_THAT(eta(1e4, 2.0, 2), WithinRel(std::log(1e4), 1e-14));
  CHECK_THAT(eta(100.0, 1.0, 1), WithinRel(10.0, 1e-14));
  CHECK_THAT(eta(1e6, 3.0, 2), WithinRel(std::pow(1e6, -0.5) * std::pow(std::log(1e6), 1.5), 1e-14));
}

TEST_CASE("tau across the three regimes") {
  const double n = 1e4, ln = std::log(n);
  // p < d: the cube rate
  CHECK(tau(n, 1.0, 3, 2.0) == eta(n, 1.0, 3));
  // p = d
  CHECK_THAT(tau(n, 2.0, 2, 2.0), WithinRel(ln * ln, 1e-14));
  CHECK_THAT(tau(n, 3.0, 3, 2.0), WithinRel(std::pow(ln, 1.5), 1e-14));
  CHECK_THAT(tau(n, 2.0, 2, 4.0), WithinRel(std::pow(ln, 1.5), 1e-14));
  // p > d: (log n)^{d - 1 - p (1 - 1/q)}
  CHECK_THAT(tau(n, 3.0, 2, 2.0), WithinRel(std::pow(ln, -0.5), 1e-14));
  CHECK_THAT(tau(n, 4.0, 3, 2.0), WithinRel(1.0, 1e-14));
  CHECK_THROWS_AS(tau(n, 1.0, 1, 2.0), std::domain_error);
}

TEST_CASE("xi for p = 2, d = 3") {
  // n^{1/p - 1/2} tau^{-1/p} = tau^{-1/2} = n^{-1/6}
  CHECK_THAT(xi(1e4, 2.0, 3, 2.0, 0.1), WithinRel(0.21544346900318837, 1e-12));
  CHECK_THAT(xi(1e4, 1.0, 3, 2.0, 0.1), WithinRel(std::pow(1e4, 0.5) / eta(1e4, 1.0, 3), 1e-12));
  CHECK_THAT(xi(1e4, 3.0, 3, 2.0, 0.1), WithinRel(std::pow(tau(1e4, 3.0, 3, 2.0), -1.0 / 3.0 + 0.1), 1e-12));
  CHECK_THROWS_AS(xi(1e4, 3.0, 2, 2.0, 0.1), std::domain_error);
}

TEST_CASE("known prefactors and the ell constant") {
  CHECK_THAT(*known_prefactor(2.0, 2, 2.0, Target::cube), WithinRel(1.0 / (4.0 * std::numbers::pi), 1e-15));
  CHECK(*known_prefactor(2.0, 2, 2.0, Target::full_space) == 0.25);
  CHECK_FALSE(known_prefactor(2.0, 2, 3.0, Target::full_space).has_value());
  CHECK_FALSE(known_prefactor(1.0, 2, 2.0, Target::cube).has_value());
  // q^{d/q} |B_1| (1 - d/(d+q)) in d = 2; no correction in d = 3
  CHECK_THAT(ell_power(2.0, 2), WithinRel(std::numbers::pi, 1e-14));
  CHECK_THAT(ell_power(2.0, 3), WithinRel(std::pow(2.0, 1.5) * 4.0 * std::numbers::pi / 3.0, 1e-14));
}

TEST_CASE("truncation exponents") {
  const auto a = truncation_exponents(1.0, 3, 2.0);
  CHECK(a.alpha == 0.0);
  CHECK_THAT(a.beta, WithinRel((1.0 / 3.0 + 1.0) / 2.0, 1e-15));
  const auto b = truncation_exponents(2.0, 2, 2.0);
  CHECK(b.alpha == 4.0);
  CHECK(b.beta == 1.0);
  CHECK(truncation_exponents(3.0, 3, 2.0).alpha == 4.0);
  CHECK(truncation_exponents(3.0, 2, 2.0).alpha == 2.0);
}

TEST_CASE("predict bundles the rates") {
  const auto r = predict(1e3, 3.0, 2, 2.0);
  CHECK(std::isnan(r.xi));
  CHECK(r.tau == tau(1e3, 3.0, 2, 2.0));
  CHECK(predict(1e3, 0.5, 1, 2.0).ell == 0.0);
}
