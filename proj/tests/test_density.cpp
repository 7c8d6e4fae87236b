#include <catch_amalgamated.hpp>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "matchlab/core/stats.hpp"
#include "matchlab/density/truncate.hpp"

using namespace matchlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
std::shared_ptr<const RadialDensity> gaussian(int d) {
  return std::make_shared<const RadialDensity>(normalize(gaussian_potential(d)));
}
// chi law of |X| for a standard Gaussian in R^d
double chi_cdf(int d, double t) { return boost::math::gamma_p(0.5 * d, 0.5 * t * t); }
double chi_moment(int d, double p) {
  return std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (d + p)) / std::tgamma(0.5 * d);
}
}  // namespace

TEST_CASE("normalization of the Gaussian potential") {
  for (int d = 1; d <= 3; ++d) {
    const auto v = normalize(gaussian_potential(d));
    CHECK_THAT(v.offset, WithinRel(0.5 * d * std::log(2.0 * std::numbers::pi), 1e-12));
  }
  // exp(-|x|) in d = 2 has mass 2 pi
  const auto v = normalize(PowerPotential{1.0, 1.0, 0.0, 2});
  CHECK_THAT(v.offset, WithinRel(std::log(2.0 * std::numbers::pi), 1e-12));
}

TEST_CASE("radial CDF, survival and quantile against the chi law") {
  for (int d = 1; d <= 3; ++d) {
    const auto law = gaussian(d);
    for (const double t : {0.05, 0.5, 1.0, 2.0, 4.0}) {
      CHECK_THAT(law->cdf(t), WithinAbs(chi_cdf(d, t), 1e-10));
      CHECK_THAT(law->quantile(chi_cdf(d, t)), WithinRel(t, 1e-7));
    }
    CHECK_THAT(law->sf(7.0), WithinRel(boost::math::gamma_q(0.5 * d, 24.5), 1e-6));
    CHECK_THAT(law->sf_quantile(boost::math::gamma_q(0.5 * d, 24.5)), WithinRel(7.0, 1e-6));
  }
  // d = 2 survival in closed form, far tail
  CHECK_THAT(gaussian(2)->sf(9.0), WithinRel(std::exp(-40.5), 1e-6));
}

TEST_CASE("moments of |X|") {
  for (int d = 1; d <= 3; ++d) {
    const auto law = gaussian(d);
    for (const double p : {1.0, 2.0, 3.0}) CHECK_THAT(law->moment(p), WithinRel(chi_moment(d, p), 1e-9));
  }
}

TEST_CASE("sampling matches the second moment") {
  const auto law = gaussian(3);
  auto rng = make_rng(11);
  const auto pts = law->sample(20000, rng);
  std::vector<double> r2;
  for (std::size_t i = 0; i < 20000; ++i) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += pts[3 * i + k] * pts[3 * i + k];
    r2.push_back(s);
  }
  const auto s = summarize(r2);
  CHECK(std::abs(s.mean - 3.0) < 4.0 * s.se);
}

TEST_CASE("truncation radius solves its defining equation") {
  const auto v = normalize(gaussian_potential(2));
  const double n = 1e4;
  const auto e = truncation_exponents(2.0, 2, 2.0);
  const double r = solve_radius(v, e.alpha, e.beta, n);
  CHECK_THAT(v(r) + e.alpha * std::log(r), WithinRel(e.beta * std::log(n), 1e-10));
  const auto e1 = truncation_exponents(1.0, 3, 2.0);
  const auto v3 = normalize(gaussian_potential(3));
  const double r1 = solve_radius(v3, e1.alpha, e1.beta, n);
  CHECK_THAT(v3(r1), WithinRel(e1.beta * std::log(n), 1e-10));
}

TEST_CASE("truncated law keeps rho inside R' and the total mass") {
  const auto base = gaussian(2);
  const auto tr = truncate(base, 0.1, 2.0, 1e3);
  const auto& law = *tr.law;
  const double rp = law.r_prime(), R = law.r_outer();
  REQUIRE(rp < R);
  CHECK_THAT(law.cdf(0.7 * rp), WithinRel(base->cdf(0.7 * rp), 1e-12));
  CHECK(law.sf(R) == 0.0);
  CHECK_THAT(law.density(0.5 * (rp + R)), WithinRel(law.boost() * base->density(0.5 * (rp + R)), 1e-12));
  CHECK_THAT(law.boost(), WithinRel(base->sf(rp) / (base->sf(rp) - base->sf(R)), 1e-14));
  CHECK_THAT(law.partial_moment(0.0, R, 0.0), WithinRel(1.0, 1e-9));
}
