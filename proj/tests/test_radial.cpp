#include <catch_amalgamated.hpp>

#include <cmath>

#include "matchlab/density/truncate.hpp"
#include "matchlab/ot/radial.hpp"
#include "matchlab/rates.hpp"

using namespace matchlab;
using namespace matchlab::ot;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
std::shared_ptr<const RadialDensity> gaussian(int d) {
  return std::make_shared<const RadialDensity>(normalize(gaussian_potential(d)));
}
}  // namespace

TEST_CASE("Neumann flux on two halves of the unit interval") {
  // counts 3 and 1 against n = 4: kappa = 6, 2, so phi'' = 2 on the left, -2 on the right
  const auto lam = std::make_shared<const UniformInterval>(0.0, 1.0);
  const auto f2 = neumann_flux_bound(lam, {0.0, 0.5, 1.0}, {3.0, 1.0}, 4.0, 2.0);
  CHECK_THAT(f2.flux(0.25), WithinAbs(0.5, 1e-12));
  CHECK_THAT(f2.flux(0.75), WithinAbs(0.5, 1e-12));
  CHECK_THAT(f2.flux(0.5), WithinAbs(1.0, 1e-12));
  CHECK_THAT(f2.bound, WithinRel(1.0 / 12.0, 1e-10));
  CHECK(f2.endpoint_residual < 1e-12);
  const auto f1 = neumann_flux_bound(lam, {0.0, 0.5, 1.0}, {3.0, 1.0}, 4.0, 1.0);
  CHECK_THAT(f1.bound, WithinRel(0.5, 1e-10));
}

TEST_CASE("rebalanced cost on the same instance") {
  const UniformInterval lam(0.0, 1.0);
  CHECK_THAT(rebalanced_cost(lam, {0.0, 0.5, 1.0}, {3.0, 1.0}, 4.0, 1.0), WithinRel(0.5, 1e-9));
  CHECK_THAT(rebalanced_cost(lam, {0.0, 0.5, 1.0}, {3.0, 1.0}, 4.0, 2.0), WithinRel(1.0 / 12.0, 1e-9));
  CHECK_THAT(rebalanced_cost(lam, {0.0, 0.5, 1.0}, {2.0, 2.0}, 4.0, 2.0), WithinAbs(0.0, 1e-14));
}

TEST_CASE("radial distance: zero on itself, homogeneous under dilation") {
  const auto law = gaussian(3);
  CHECK(radial_1d_cost(*law, *law, 1.0) == 0.0);
  const auto tr = truncate(law, 0.1, 1.0, 1e3);
  const double base = radial_1d_cost(*law, *tr.law, 2.0);
  CHECK(base > 0.0);
  const DilatedLaw a(law, 2.0), b(tr.law, 2.0);
  CHECK_THAT(radial_1d_cost(a, b, 2.0), WithinRel(4.0 * base, 1e-7));
}

TEST_CASE("radial distance between two dilations of the Gaussian") {
  // monotone coupling t -> 2t: E |X|^p (2 - 1)^p
  const auto law = gaussian(2);
  const DilatedLaw wide(law, 2.0);
  CHECK_THAT(radial_1d_cost(*law, wide, 2.0), WithinRel(2.0, 1e-8));
  CHECK_THAT(radial_1d_cost(*law, wide, 1.0), WithinRel(law->moment(1.0), 1e-8));
}

TEST_CASE("truncation cost per point decays faster than tau in d = 3, p = 1") {
  const auto law = gaussian(3);
  double prev = std::numeric_limits<double>::infinity();
  for (const double n : {1e3, 1e4, 1e5}) {
    const auto tr = truncate(law, 0.1, 1.0, n);
    const double r = n * radial_1d_cost(*law, *tr.law, 1.0) / tau(n, 1.0, 3, 2.0);
    CHECK(r < prev);
    prev = r;
  }
}
