#include <catch_amalgamated.hpp>

#include <cmath>

#include "matchlab/density/truncate.hpp"
#include "matchlab/ot/quantization.hpp"
#include "matchlab/ot/radial.hpp"
#include "matchlab/ot/semidiscrete.hpp"

using namespace matchlab;
using namespace matchlab::ot;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
std::shared_ptr<const RadialDensity> gaussian(int d) {
  return std::make_shared<const RadialDensity>(normalize(gaussian_potential(d)));
}
double total(const DiscreteMeasure& m) { return m.total(); }
}  // namespace

TEST_CASE("error radius formula") {
  CHECK(error_radius(4.0, 0.0, 2.0) == 0.0);
  // (2 + 1)^2 - 4
  CHECK_THAT(error_radius(4.0, 1.0, 2.0), WithinRel(5.0, 1e-15));
  CHECK_THAT(error_radius(4.0, 1.0, 1.0), WithinRel(1.0, 1e-15));
}

TEST_CASE("radial quantization: unit mass, centred, exact second moment error") {
  for (int d = 1; d <= 3; ++d) {
    const auto law = gaussian(d);
    const auto q = quantize_radial(*law, 2000, 2.0);
    CHECK_THAT(total(q.atoms), WithinRel(1.0, 1e-12));
    std::vector<double> mean(static_cast<std::size_t>(d), 0.0);
    double second = 0.0;
    for (std::size_t i = 0; i < q.atoms.size(); ++i) {
      double r2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double x = q.atoms.points[i * d + k];
        mean[static_cast<std::size_t>(k)] += q.atoms.weights[i] * x;
        r2 += x * x;
      }
      second += q.atoms.weights[i] * r2;
    }
    for (const double m : mean) CHECK_THAT(m, WithinAbs(0.0, 1e-10));
    // E|X|^2 = E|c(X)|^2 + Q for centroids
    CHECK_THAT(second + q.moment_error, WithinRel(static_cast<double>(d), 1e-8));
  }
}

TEST_CASE("cube quantization error p = 2") {
  const auto q = quantize_cube(2, 1024, 2.0);
  CHECK(q.atoms.size() == 1024);
  const double h = 1.0 / 32.0;
  CHECK_THAT(q.moment_error, WithinRel(2.0 * h * h / 12.0, 1e-12));
  // E|U|, U uniform on [-h/2, h/2]: h / 4 per axis in d = 1
  CHECK_THAT(quantize_cube(1, 10, 1.0).moment_error, WithinRel(0.1 / 4.0, 1e-10));
}

TEST_CASE("self-matching of the atoms costs nothing") {
  const auto law = gaussian(2);
  const auto q = quantize_radial(*law, 400, 2.0);
  DiscreteMeasure mu = q.atoms;
  for (auto& w : mu.weights) w *= 400.0;
  const auto r = semidiscrete_cost(mu, q);
  CHECK_THAT(r.cost, WithinAbs(0.0, 1e-10));
}

TEST_CASE("semi-discrete cost of a radial sample sits within its error radius of the radial bound") {
  // W(mu_n, n rho) >= n W(radial sample law, radial law) in the radial variable
  const auto law = gaussian(2);
  auto rng = make_rng(4);
  const std::size_t n = 500;
  const auto mu = DiscreteMeasure::unit(2, law->sample(n, rng));
  const auto res = semidiscrete_cost(mu, *law, 2.0, 4 * n);
  CHECK(res.cost > 0.0);
  CHECK(res.error_radius > 0.0);
  std::vector<double> radii;
  for (std::size_t i = 0; i < n; ++i) radii.push_back(std::hypot(mu.points[2 * i], mu.points[2 * i + 1]));
  std::sort(radii.begin(), radii.end());
  // Quantile coupling of the sorted radii, fine midpoint rule.
  double radial = 0.0;
  const int sub = 64;
  for (std::size_t i = 0; i < n; ++i)
    for (int s = 0; s < sub; ++s) {
      const double u = (static_cast<double>(i) + (s + 0.5) / sub) / static_cast<double>(n);
      radial += std::pow(radii[i] - law->quantile(u), 2.0) / sub;
    }
  CHECK(res.cost + res.error_radius >= radial);
}

TEST_CASE("doubling the atom budget shrinks the error radius on the truncated law in d = 1") {
  const auto tr = truncate(gaussian(1), 0.1, 2.0, 200.0);
  auto rng = make_rng(8);
  const auto mu = DiscreteMeasure::unit(1, tr.law->sample(200, rng));
  double prev = 0.0;
  for (const std::size_t M : {800ul, 1600ul, 3200ul}) {
    const auto r = semidiscrete_cost(mu, *tr.law, 2.0, M);
    if (prev > 0.0) CHECK(prev / r.error_radius >= 1.5);
    prev = r.error_radius;
  }
}

TEST_CASE("budget and input errors") {
  const auto law = gaussian(2);
  auto rng = make_rng(1);
  const auto mu = DiscreteMeasure::unit(2, law->sample(100, rng));
  CHECK_THROWS_AS(semidiscrete_cost(mu, *law, 2.0, 50), std::invalid_argument);
  CHECK_THROWS_AS(semidiscrete_cost(mu, *law, 2.0, 400, 1e-6), BudgetError);
}
