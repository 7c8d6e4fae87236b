#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "matchlab/density/radial_law.hpp"
#include "matchlab/geometry/sphere_partition.hpp"
#include "matchlab/ot/geometric_cost.hpp"
#include "matchlab/ot/measure.hpp"

namespace matchlab::ot {

/// M atoms of mass 1/M standing for a probability density, with the exact
/// (or quadrature) value of sum_cells int_cell |x - c|^p rho, which bounds
/// W_p^p between the density and the atoms.
struct Quantization {
  DiscreteMeasure atoms;
  double p = 2.0;
  double moment_error = 0.0;
  std::size_t strata = 0;
};

namespace detail {

// GL rule of order N on [a, b], accumulated into f.
template <int N, class F>
double gl(F&& f, double a, double b) {
  const auto& x = boost::math::quadrature::gauss<double, N>::abscissa();
  const auto& w = boost::math::quadrature::gauss<double, N>::weights();
  const double h = 0.5 * (b - a), m = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      s += w[i] * f(m);
    } else {
      s += w[i] * (f(m - h * x[i]) + f(m + h * x[i]));
    }
  }
  return s * h;
}

// Pieces of survival level s = 1 - u covering [s0, s1], split at the
// quantile kinks and geometrically toward s = 0 for unbounded support.
inline std::vector<std::array<double, 2>> s_pieces(const RadialLaw& law, double s0, double s1) {
  std::vector<double> cuts{s0};
  for (const double b : law.breakpoints()) {
    const double s = law.sf(b);
    if (s > s0 && s < s1) cuts.push_back(s);
  }
  cuts.push_back(s1);
  std::vector<std::array<double, 2>> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (a <= 0.0 && !std::isfinite(law.sf_quantile(0.0))) {
      double gap = b;
      while (gap > 1e-18) {
        out.push_back({0.5 * gap, gap});
        gap *= 0.5;
      }
      continue;
    }
    out.push_back({a, b});
  }
  return out;
}

// Radius at survival level s.
inline double radius_at(const RadialLaw& law, double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s < 0.5 ? law.sf_quantile(s) : law.quantile(1.0 - s);
}

}  // namespace detail

/// Number of radial strata for M atoms in dimension d.
inline std::size_t default_strata(std::size_t M, int d) {
  if (d == 1) return (M + 1) / 2;
  const double s = d == 2 ? std::sqrt(static_cast<double>(M)) : std::cbrt(static_cast<double>(M));
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(s)), 1, M);
}

/// Radial strata of equal mass per atom, each cut into equal-measure angular
/// cells; atoms at cell centroids.
inline Quantization quantize_radial(const RadialLaw& law, std::size_t M, double p, std::size_t strata = 0) {
  const int d = law.dim();
  if (d < 1 || d > 3) throw std::invalid_argument("quantize_radial: d must be 1, 2 or 3");
  if (M == 0) throw std::invalid_argument("quantize_radial: empty budget");
  if (strata == 0) strata = default_strata(M, d);
  // Cells per stratum.
  std::vector<std::size_t> cells(strata);
  if (d == 1) {
    std::fill(cells.begin(), cells.end(), 2);
    if (M % 2 == 1) cells[0] = 1;
    if (M == 1) cells.assign(1, 1);
  } else {
    for (std::size_t s = 0; s < strata; ++s) cells[s] = M / strata + (s >= strata - M % strata ? 1 : 0);
  }
  Quantization out;
  out.p = p;
  out.strata = strata;
  out.atoms.dim = d;
  const double w = 1.0 / static_cast<double>(M);
  std::size_t used = 0;
  double err = 0.0;
  for (std::size_t s = 0; s < strata; ++s) {
    const double u0 = static_cast<double>(used) * w;
    used += cells[s];
    const double u1 = s + 1 == strata ? 1.0 : static_cast<double>(used) * w;
    const double r0 = law.quantile(u0);
    const double r1 = s + 1 == strata ? law.support_end() : law.quantile(u1);
    const double mass = u1 - u0;

    const double mean_r = law.partial_moment(r0, r1, 1.0) / mass;
    const SpherePartition sp(d, cells[s]);
    for (std::size_t k = 0; k < cells[s]; ++k) {
      const auto dir = sp.mean_direction(k);
      std::array<double, 3> c{};
      for (int t = 0; t < d; ++t) c[static_cast<std::size_t>(t)] = mean_r * dir[static_cast<std::size_t>(t)];
      out.atoms.push(std::span<const double>(c.data(), static_cast<std::size_t>(d)), w);
    }
    if (p == 2.0) {
      // int |x - c|^2 = mass E r^2 - sum_cells w |c|^2
      err += law.partial_moment(r0, r1, 2.0);
      for (std::size_t k = 0; k < cells[s]; ++k) {
        const auto dir = sp.mean_direction(k);
        double c2 = 0.0;
        for (int t = 0; t < d; ++t) c2 += dir[static_cast<std::size_t>(t)] * dir[static_cast<std::size_t>(t)];
        err -= w * mean_r * mean_r * c2;
      }
      continue;
    }
    // General p: one cell per congruence class, quadrature in (u, angles).
    const auto pieces = detail::s_pieces(law, s + 1 == strata ? 0.0 : 1.0 - u1, 1.0 - u0);
    for (const auto rep : sp.representatives()) {
      const auto dir = sp.mean_direction(rep);
      std::size_t multiplicity = cells[s];
      if (d == 3) multiplicity = sp.band_of(rep).cells;
      double per_cell = 0.0;  // int over the cell of |x - c|^p rho, per unit angular fraction
      for (const auto& pc : pieces) {
        per_cell += detail::gl<16>(
            [&](double sv) {
              const double r = detail::radius_at(law, sv);
              if (d == 1) {
                const double x = r * (cells[s] == 1 ? 1.0 : (rep == 0 ? 1.0 : -1.0));
                const double cx = mean_r * dir[0];
                if (cells[s] == 1) return 0.5 * (power(std::abs(x - cx), p) + power(std::abs(-x - cx), p));
                return power(std::abs(x - cx), p);
              }
              if (d == 2) {
                const auto [a, b] = sp.longitude(rep);
                const double cx = mean_r * dir[0], cy = mean_r * dir[1];
                return detail::gl<24>(
                           [&](double phi) {
                             const double dx = r * std::cos(phi) - cx, dy = r * std::sin(phi) - cy;
                             return power(std::sqrt(dx * dx + dy * dy), p);
                           },
                           a, b) /
                       (b - a);
              }
              const auto& band = sp.band_of(rep);
              const auto [a, b] = sp.longitude(rep);
              const double cx = mean_r * dir[0], cy = mean_r * dir[1], cz = mean_r * dir[2];
              return detail::gl<12>(
                         [&](double z) {
                           const double sz = std::sqrt(std::max(0.0, 1.0 - z * z));
                           return detail::gl<12>(
                               [&](double phi) {
                                 const double dx = r * sz * std::cos(phi) - cx, dy = r * sz * std::sin(phi) - cy,
                                              dz = r * z - cz;
                                 return power(std::sqrt(dx * dx + dy * dy + dz * dz), p);
                               },
                               a, b);
                         },
                         band.z_lo, band.z_hi) /
                     ((b - a) * (band.z_hi - band.z_lo));
            },
            pc[0], pc[1]);
      }
      // per_cell integrates over s with the angular average; each cell holds 1/cells of it.
      err += per_cell * static_cast<double>(multiplicity) / static_cast<double>(cells[s]);
    }
  }
  out.moment_error = std::max(0.0, err);
  return out;
}

/// Regular grid on the unit cube, k = round(M^{1/d}) cells per axis.
inline Quantization quantize_cube(int d, std::size_t M, double p) {
  if (d < 1 || d > 3) throw std::invalid_argument("quantize_cube: d must be 1, 2 or 3");
  const auto k = static_cast<std::size_t>(std::max(1L, std::lround(std::pow(static_cast<double>(M), 1.0 / d))));
  std::size_t total = 1;
  for (int t = 0; t < d; ++t) total *= k;
  Quantization out;
  out.p = p;
  out.atoms.dim = d;
  const double h = 1.0 / static_cast<double>(k);
  const double w = 1.0 / static_cast<double>(total);
  std::array<double, 3> x{};
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int t = 0; t < d; ++t) {
      x[static_cast<std::size_t>(t)] = (static_cast<double>(rest % k) + 0.5) * h;
      rest /= k;
    }
    out.atoms.push(std::span<const double>(x.data(), static_cast<std::size_t>(d)), w);
  }
  // E|Y|^p for Y uniform on [-h/2, h/2]^d, by orthant symmetry.
  double e = 0.0;
  if (p == 2.0) {
    e = d * h * h / 12.0;
  } else {
    const double a = 0.5 * h;
    auto f1 = [&](double y) { return power(y, p); };
    if (d == 1) e = detail::gl<20>(f1, 0.0, a) / a;
    if (d == 2)
      e = detail::gl<20>([&](double y) { return detail::gl<20>([&](double z) { return power(std::hypot(y, z), p); }, 0.0, a); }, 0.0, a) /
          (a * a);
    if (d == 3)
      e = detail::gl<12>(
              [&](double y) {
                return detail::gl<12>(
                    [&](double z) {
                      return detail::gl<12>([&](double t) { return power(std::sqrt(y * y + z * z + t * t), p); }, 0.0, a);
                    },
                    0.0, a);
              },
              0.0, a) /
          (a * a * a);
  }
  out.moment_error = e;
  return out;
}

/// Angular box: longitude [phi_lo, phi_hi) and, in d = 3, z = cos(polar) in [z_lo, z_hi).
struct AngularBox {
  double phi_lo = -std::numbers::pi, phi_hi = std::numbers::pi;
  double z_lo = -1.0, z_hi = 1.0;
};

/// Mean of the unit vector over an angular box (uniform surface measure).
inline std::array<double, 3> box_direction(int d, const AngularBox& b) {
  const double w = b.phi_hi - b.phi_lo, mid = 0.5 * (b.phi_lo + b.phi_hi);
  const double f = w >= 2.0 * std::numbers::pi - 1e-15 ? 0.0 : std::sin(0.5 * w) / (0.5 * w);
  if (d == 2) return {f * std::cos(mid), f * std::sin(mid), 0.0};
  auto g = [](double z) { return 0.5 * (z * std::sqrt(std::max(0.0, 1.0 - z * z)) + std::asin(z)); };
  const double sz = (g(b.z_hi) - g(b.z_lo)) / (b.z_hi - b.z_lo);
  return {sz * f * std::cos(mid), sz * f * std::sin(mid), 0.5 * (b.z_lo + b.z_hi)};
}

/// Appends about m atoms quantizing law restricted to r_lo <= |x| < r_hi with
/// direction in box (d = 2, 3); weights are exact masses times mass_scale.
inline void quantize_sector(const RadialLaw& law, double r_lo, double r_hi, const AngularBox& box, std::size_t m,
                            double mass_scale, DiscreteMeasure& out) {
  const int d = law.dim();
  if (d != 2 && d != 3) throw std::invalid_argument("quantize_sector: d must be 2 or 3");
  m = std::max<std::size_t>(m, 1);
  std::size_t nr = 1, nz = 1, nphi = 1;
  if (d == 2) {
    nr = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
    nphi = (m + nr - 1) / nr;
  } else {
    nr = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(m))));
    nz = nr;
    nphi = (m + nr * nz - 1) / (nr * nz);
  }
  const double angular = (box.phi_hi - box.phi_lo) / (2.0 * std::numbers::pi) *
                         (d == 3 ? (box.z_hi - box.z_lo) / 2.0 : 1.0);
  const double s_lo = law.sf(r_lo), s_hi = law.sf(r_hi);
  std::array<double, 3> x{};
  for (std::size_t a = 0; a < nr; ++a) {
    // Equal radial mass strata in survival level.
    const double sa = s_lo + (s_hi - s_lo) * static_cast<double>(a) / static_cast<double>(nr);
    const double sb = s_lo + (s_hi - s_lo) * static_cast<double>(a + 1) / static_cast<double>(nr);
    const double ra = a == 0 ? r_lo : detail::radius_at(law, sa);
    const double rb = a + 1 == nr ? r_hi : detail::radius_at(law, sb);
    const double mass = sa - sb;
    if (!(mass > 0.0)) continue;
    const double mean_r = law.partial_moment(ra, rb, 1.0) / mass;
    for (std::size_t iz = 0; iz < nz; ++iz) {
      for (std::size_t ip = 0; ip < nphi; ++ip) {
        AngularBox sub = box;
        sub.phi_lo = box.phi_lo + (box.phi_hi - box.phi_lo) * static_cast<double>(ip) / static_cast<double>(nphi);
        sub.phi_hi = box.phi_lo + (box.phi_hi - box.phi_lo) * static_cast<double>(ip + 1) / static_cast<double>(nphi);
        if (d == 3) {
          sub.z_lo = box.z_lo + (box.z_hi - box.z_lo) * static_cast<double>(iz) / static_cast<double>(nz);
          sub.z_hi = box.z_lo + (box.z_hi - box.z_lo) * static_cast<double>(iz + 1) / static_cast<double>(nz);
        }
        const auto dir = box_direction(d, sub);
        for (int t = 0; t < d; ++t) x[static_cast<std::size_t>(t)] = mean_r * dir[static_cast<std::size_t>(t)];
        out.push(std::span<const double>(x.data(), static_cast<std::size_t>(d)),
                 mass_scale * mass * angular / static_cast<double>(nz * nphi));
      }
    }
  }
}

}  // namespace matchlab::ot
