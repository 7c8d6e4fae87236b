#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "matchlab/density/potential.hpp"

namespace matchlab {

/// Matching rate on the unit cube.
inline double eta(double n, double p, int d) {
  if (d == 1) return std::pow(n, 1.0 - 0.5 * p);
  if (d == 2) return std::pow(n, 1.0 - 0.5 * p) * std::pow(std::log(n), 0.5 * p);
  return std::pow(n, 1.0 - p / d);
}

/// Rate of E W_p^p(mu_n, n rho) for a potential growing like t^q.
inline double tau(double n, double p, int d, double q) {
  if (p < d) return eta(n, p, d);
  const double ln = std::log(n);
  if (p == d) {
    if (d == 2) return std::pow(ln, 1.0 + 2.0 / q);
    if (d >= 3) return std::pow(ln, d / q);
    // d = 1, p = 1: no unbounded-support rate of this form
    throw std::domain_error("tau: p = d = 1 is not covered");
  }
  if (d < 2) throw std::domain_error("tau: p > d needs d >= 2");
  return std::pow(ln, d - 1.0 - p * (1.0 - 1.0 / q));
}

/// l for V = V(0) + t^q / q.
inline double ell_power(double q, int d) {
  if (!(q > 0.0) || d < 2) throw std::domain_error("ell_power: need q > 0 and d >= 2");
  const double ball = unit_ball_volume(d);
  const double cut = d == 2 ? d / (d + q) : 0.0;
  return std::pow(q, d / q) * ball * (1.0 - cut);
}

/// Fluctuation scale of W_p^p / tau_n.
inline double xi(double n, double p, int d, double q, double eps) {
  if (p > d) throw std::domain_error("xi: defined for p <= d only");
  const double t = tau(n, p, d, q);
  if (p <= 2.0) return std::pow(n, 1.0 / p - 0.5) * std::pow(t, -1.0 / p);
  if (p < d) return std::pow(t, 0.5 * (eps - 1.0));
  return std::pow(t, -1.0 / d + eps);
}

enum class Target { cube, full_space };

/// Exactly known limits: 1/(4 pi) on the cube for p = d = 2, and 1/4 for the
/// Gaussian (q = 2) in the plane with p = 2.
inline std::optional<double> known_prefactor(double p, int d, double q, Target target) {
  if (p != 2.0 || d != 2) return std::nullopt;
  if (target == Target::cube) return 1.0 / (4.0 * std::numbers::pi);
  if (q == 2.0) return 0.25;
  return std::nullopt;
}

struct RatePrediction {
  double eta = 0.0;
  double tau = 0.0;
  double ell = 0.0;  // 0 when d < 2
  double xi = 0.0;   // NaN when p > d
  std::optional<double> known_prefactor;
};

inline RatePrediction predict(double n, double p, int d, double q, double eps = 0.1,
                              Target target = Target::full_space) {
  RatePrediction r;
  r.eta = eta(n, p, d);
  r.tau = tau(n, p, d, q);
  r.ell = d >= 2 ? ell_power(q, d) : 0.0;
  r.xi = p <= d ? xi(n, p, d, q, eps) : std::nan("");
  r.known_prefactor = known_prefactor(p, d, q, target);
  return r;
}

}  // namespace matchlab
