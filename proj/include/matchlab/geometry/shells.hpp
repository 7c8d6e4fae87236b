#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "matchlab/density/potential.hpp"

namespace matchlab {

enum class DeltaRegime { constant, radius_dependent };

/// Radii r_1 < ... < r_{j_n} with r_j = (1 + delta_j) r_{j-1}; r_{j_n} is the
/// first radius at or beyond r_bar.
struct ShellSchedule {
  std::vector<double> r;      // r[j-1] = r_j
  std::vector<double> delta;  // delta[j-1] = delta_j for j >= 2; delta[0] = 0
  DeltaRegime regime = DeltaRegime::constant;
  double r_bar = 0.0;
  double eps = 0.0;
  double n = 0.0;
  double alpha = 0.0;
  double beta = 1.0;

  [[nodiscard]] std::size_t j_n() const { return r.size(); }
  [[nodiscard]] double r1() const { return r.front(); }
  [[nodiscard]] double r_outer() const { return r.back(); }
  [[nodiscard]] double r_prime() const { return r[r.size() - 2]; }
  [[nodiscard]] double delta_last() const { return delta.back(); }

  /// Shell index j (2..j_n) with r_{j-1} <= t < r_j; 1 for the inner ball; 0 outside.
  [[nodiscard]] std::size_t shell_of(double t) const {
    if (t < r.front()) return 1;
    if (t > r.back()) return 0;
    std::size_t lo = 0, hi = r.size() - 1;  // r[lo] <= t < r[hi]
    if (t == r.back()) return r.size();
    while (hi - lo > 1) {
      const auto mid = (lo + hi) / 2;
      if (r[mid] <= t) lo = mid;
      else hi = mid;
    }
    return hi + 1;
  }
};

/// Smallest r1 >= 1 past which t^{d-q} exp(-V(t)) decreases.
inline double default_r1(const PowerPotential& v) {
  if (v.d > v.q) return std::max(1.0, std::pow((v.d - v.q) / v.scale, 1.0 / v.q));
  return 1.0;
}

inline DeltaRegime delta_regime(double p, int d) {
  return (d == 2 && p >= 1.0 && p < 2.0) ? DeltaRegime::radius_dependent : DeltaRegime::constant;
}

inline ShellSchedule build_radii(const PowerPotential& v, double eps, double n, double p, double r1) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("build_radii: eps must lie in (0,1)");
  if (!(r1 >= 1.0)) throw std::invalid_argument("build_radii: r1 must be at least 1");
  const auto ab = truncation_exponents(p, v.d, v.q);
  ShellSchedule s;
  s.eps = eps;
  s.n = n;
  s.alpha = ab.alpha;
  s.beta = ab.beta;
  s.regime = delta_regime(p, v.d);
  s.r_bar = solve_radius(v, ab.alpha, ab.beta, n);
  if (r1 >= s.r_bar) throw std::domain_error("build_radii: r1 already exceeds the truncation radius (n too small)");
  s.r.push_back(r1);
  s.delta.push_back(0.0);
  const double log_n = std::log(n);
  while (s.r.back() < s.r_bar) {
    const double prev = s.r.back();
    const double dj = s.regime == DeltaRegime::radius_dependent ? eps * std::pow(prev, -v.q) : eps / log_n;
    s.delta.push_back(dj);
    s.r.push_back((1.0 + dj) * prev);
    if (s.r.size() > 50000000) throw std::runtime_error("build_radii: schedule does not terminate");
  }
  return s;
}

inline ShellSchedule build_radii(const PowerPotential& v, double eps, double n, double p) {
  return build_radii(v, eps, n, p, default_r1(v));
}

}  // namespace matchlab
