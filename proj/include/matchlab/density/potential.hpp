#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "matchlab/core/quadrature.hpp"

namespace matchlab {

/// |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2).
inline double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

/// |B_1| in R^d.
inline double unit_ball_volume(int d) { return sphere_area(d) / d; }

/// V(t) = offset + scale * t^q / q on [0, inf).
struct PowerPotential {
  double q = 2.0;
  double scale = 1.0;
  double offset = 0.0;
  int d = 1;

  [[nodiscard]] double operator()(double t) const { return offset + scale * std::pow(t, q) / q; }
  [[nodiscard]] double derivative(double t) const { return scale * std::pow(t, q - 1.0); }
  /// Constant of the two-sided bound t^{q-1}/C <= V'(t) <= C t^{q-1}.
  [[nodiscard]] double bound_constant() const { return std::max(scale, 1.0 / scale); }
  /// exp(-V(t)), the density value at |x| = t.
  [[nodiscard]] double density(double t) const { return std::exp(-(*this)(t)); }

  void validate() const {
    if (!(q > 0.0) || !std::isfinite(q)) throw std::invalid_argument("potential exponent q must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("potential scale must be positive");
    if (d < 1) throw std::invalid_argument("dimension must be at least 1");
  }
};

inline PowerPotential gaussian_potential(int d) { return PowerPotential{2.0, 1.0, 0.0, d}; }

/// Sets the offset so that exp(-V) integrates to one over R^d.
inline PowerPotential normalize(PowerPotential v) {
  v.validate();
  // Radial integral of t^{d-1} exp(-scale t^q / q), by quadrature. Substituting
  // s = t/t0 keeps the integrand O(1) for extreme scales.
  const double t0 = std::pow(v.q / v.scale, 1.0 / v.q);
  const int d = v.d;
  const double q = v.q;
  auto f = [d, q](double s) {
    if (s <= 0.0) return d == 1 ? 1.0 : 0.0;
    return std::exp((d - 1) * std::log(s) - std::pow(s, q));
  };
  const double core = integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-13, "normalize");
  const double mass = sphere_area(d) * std::pow(t0, d) * core;
  v.offset = std::log(mass);
  return v;
}

/// Unique R > 0 with V(R) + alpha log R = beta log n (bisection).
inline double solve_radius(const PowerPotential& v, double alpha, double beta, double n) {
  if (!(n > 1.0)) throw std::invalid_argument("solve_radius: n must exceed 1");
  const double target = beta * std::log(n);
  auto g = [&](double r) { return v(r) + alpha * std::log(r) - target; };
  // For alpha < 0, g decreases up to r* and increases after; the root lies on the increasing branch.
  double lo = 0.0;
  if (alpha < 0.0) {
    lo = std::pow(-alpha / v.scale, 1.0 / v.q);
    if (g(lo) >= 0.0) throw std::domain_error("solve_radius: no root (n too small for these parameters)");
  } else if (alpha == 0.0) {
    if (v.offset >= target) throw std::domain_error("solve_radius: no root (n too small for these parameters)");
  }
  double hi = std::max(1.0, 2.0 * lo);
  while (g(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e300) throw std::domain_error("solve_radius: no root found");
  }
  if (alpha > 0.0) {
    // g -> -inf at 0, so shrink a lower bracket.
    lo = std::min(hi, 1.0);
    while (g(lo) > 0.0) lo *= 0.5;
  }
  for (int it = 0; it < 400 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Exponents (alpha, beta) fixing the truncation radius; open ranges take their midpoints.
struct TruncationExponents {
  double alpha = 0.0;
  double beta = 1.0;
};

inline TruncationExponents truncation_exponents(double p, int d, double q) {
  const double dd = d;
  if (p < dd) return {0.0, 0.5 * (p / dd + 1.0)};
  if (p == dd && d == 2) return {dd * (q - 1.0) + q, 1.0};
  if (p == dd) return {dd * (q - 1.0) + 0.5 * q, 1.0};
  return {dd * (q - 1.0), 1.0};
}

}  // namespace matchlab
