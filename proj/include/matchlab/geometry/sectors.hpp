#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "matchlab/core/random.hpp"
#include "matchlab/geometry/shells.hpp"

namespace matchlab {

/// z = (y, U): a point of the sphere plus a rotation of its tangent frame.
struct SectorFrame {
  int d = 2;
  std::vector<double> y;  // unit vector in R^d
  std::vector<double> U;  // (d-1) x (d-1), row-major, orthogonal

  [[nodiscard]] double u(int i, int j) const { return U[static_cast<std::size_t>(i * (d - 1) + j)]; }
};

/// Columns 2..d of the Householder reflection sending e1 to y: an orthonormal
/// basis of the tangent space at y (returned as d x (d-1), column-major).
inline Eigen::MatrixXd tangent_basis(std::span<const double> y) {
  const auto d = static_cast<Eigen::Index>(y.size());
  Eigen::VectorXd w = -Eigen::Map<const Eigen::VectorXd>(y.data(), d);
  w(0) += 1.0;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(d, d);
  const double ww = w.squaredNorm();
  if (ww > 1e-30) h -= 2.0 * w * w.transpose() / ww;
  return h.rightCols(d - 1);
}

/// Tangent coordinates (in frame U) of log_y(x / |x|), with |.| = geodesic distance.
inline Eigen::VectorXd log_coordinates(std::span<const double> x, const SectorFrame& z) {
  const auto d = static_cast<Eigen::Index>(z.d);
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), d), yv(z.y.data(), d);
  const Eigen::VectorXd xh = xv.normalized();
  const double c = std::clamp(xh.dot(yv), -1.0, 1.0);
  const Eigen::VectorXd w = xh - c * yv;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d - 1);
  const double wn = w.norm();
  if (wn > 0.0) v = tangent_basis(z.y).transpose() * (w / wn) * std::acos(c);
  Eigen::Map<const Eigen::MatrixXd> um(z.U.data(), d - 1, d - 1);  // column-major view of U^T
  return um * v;  // U^T v
}

inline bool cap_membership(std::span<const double> x, const SectorFrame& z, double delta) {
  if (delta >= 2.0 * std::numbers::pi) return true;
  const auto d = static_cast<Eigen::Index>(z.d);
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), d), yv(z.y.data(), d);
  const double xn = xv.norm();
  if (!(xn > 0.0)) throw std::invalid_argument("cap_membership: x = 0");
  const double c = std::clamp(xv.dot(yv) / xn, -1.0, 1.0);
  const double theta = std::acos(c);
  if (theta >= std::numbers::pi - 1e-9) return false;
  const double half = 0.5 * delta;
  if (theta == 0.0) return true;
  const Eigen::VectorXd xi = log_coordinates(x, z);
  const double dir = xi.cwiseAbs().maxCoeff() / theta;  // sup-norm of U^T of the unit direction
  // Every tangent vector t * direction with t = theta + 2 pi k maps to x.
  const double reach = half * std::sqrt(static_cast<double>(d - 1));
  for (int k = -2; k <= 2; ++k) {
    const double t = theta + 2.0 * std::numbers::pi * k;
    if (std::abs(t) < reach + 1e-12 && std::abs(t) * dir < half) return true;
  }
  return false;
}

/// Haar-distributed frame: y uniform, U from QR of a Gaussian matrix with the
/// signs of diag(R) absorbed.
inline SectorFrame sample_frame(int d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("sample_frame: d >= 2");
  SectorFrame z;
  z.d = d;
  z.y.resize(static_cast<std::size_t>(d));
  random_direction(rng, z.y);
  const int m = d - 1;
  Eigen::MatrixXd g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = standard_normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  z.U.resize(static_cast<std::size_t>(m * m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) z.U[static_cast<std::size_t>(i * m + j)] = q(i, j);
  return z;
}

inline SectorFrame sample_frame(int d, std::uint64_t seed) {
  auto rng = make_rng(seed);
  return sample_frame(d, rng);
}

/// Image of a frame under an orthogonal map R: (R y, B(Ry)^T R B(y) U).
inline SectorFrame rotate_frame(const SectorFrame& z, const Eigen::MatrixXd& rot) {
  const auto d = static_cast<Eigen::Index>(z.d);
  SectorFrame out;
  out.d = z.d;
  const Eigen::VectorXd y = rot * Eigen::Map<const Eigen::VectorXd>(z.y.data(), d);
  out.y.assign(y.data(), y.data() + d);
  Eigen::MatrixXd u(d - 1, d - 1);
  for (Eigen::Index i = 0; i < d - 1; ++i)
    for (Eigen::Index j = 0; j < d - 1; ++j) u(i, j) = z.u(static_cast<int>(i), static_cast<int>(j));
  const Eigen::MatrixXd u2 = tangent_basis(out.y).transpose() * rot * tangent_basis(z.y) * u;
  out.U.resize(z.U.size());
  for (Eigen::Index i = 0; i < d - 1; ++i)
    for (Eigen::Index j = 0; j < d - 1; ++j) out.U[static_cast<std::size_t>(i * (d - 1) + j)] = u2(i, j);
  return out;
}

struct Sector {
  SectorFrame frame;
  std::size_t j = 0;
  double r_lo = 0.0, r_hi = 0.0, delta = 0.0;

  [[nodiscard]] bool contains(std::span<const double> x) const {
    double r2 = 0.0;
    for (const double v : x) r2 += v * v;
    const double r = std::sqrt(r2);
    return r >= r_lo && r <= r_hi && r > 0.0 && cap_membership(x, frame, delta);
  }
};

struct McEstimate {
  double estimate = 0.0;
  double se = 0.0;
  std::optional<double> exact;
};

/// Haar probability that e1 lies in D_delta(z).
inline McEstimate sigma_tilde(double delta, int d, std::size_t samples, std::uint64_t seed) {
  McEstimate out;
  if (delta >= 2.0 * std::numbers::pi) {
    out.estimate = 1.0;
    out.exact = 1.0;
    return out;
  }
  if (d == 2) out.exact = delta / (2.0 * std::numbers::pi);
  if (samples == 0) throw std::invalid_argument("sigma_tilde: no samples");
  auto rng = make_rng(seed, 0x51u);
  std::vector<double> e1(static_cast<std::size_t>(d), 0.0);
  e1[0] = 1.0;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s)
    if (cap_membership(e1, sample_frame(d, rng), delta)) ++hits;
  const double pr = static_cast<double>(hits) / static_cast<double>(samples);
  out.estimate = pr;
  out.se = std::sqrt(pr * (1.0 - pr) / static_cast<double>(samples));
  return out;
}

/// Haar frame conditioned on d(y, center) < radius, plus the probability of
/// that event. Frames outside this cap cannot have `center` in D_delta(z) when
/// radius = delta sqrt(d-1) / 2.
inline SectorFrame sample_frame_near(std::span<const double> center, double radius, Rng& rng) {
  const int d = static_cast<int>(center.size());
  SectorFrame z = sample_frame(d, rng);
  if (radius >= std::numbers::pi) return z;
  std::vector<double> local(static_cast<std::size_t>(d), 0.0);  // cap around e1
  if (d == 2) {
    const double a = radius * (2.0 * uniform_open(rng) - 1.0);
    local[0] = std::cos(a);
    local[1] = std::sin(a);
  } else if (d == 3) {
    const double c = 1.0 - (1.0 - std::cos(radius)) * uniform_open(rng);
    const double phi = 2.0 * std::numbers::pi * uniform_open(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    local = {c, s * std::cos(phi), s * std::sin(phi)};
  } else {
    throw std::invalid_argument("sample_frame_near: d must be 2 or 3");
  }
  // Householder reflection e1 -> center.
  std::vector<double> w(center.begin(), center.end());
  for (auto& v : w) v = -v;
  w[0] += 1.0;
  double ww = 0.0, wl = 0.0;
  for (int k = 0; k < d; ++k) {
    ww += w[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(k)];
    wl += w[static_cast<std::size_t>(k)] * local[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < d; ++k)
    z.y[static_cast<std::size_t>(k)] = ww > 1e-30 ? local[static_cast<std::size_t>(k)] - 2.0 * wl / ww * w[static_cast<std::size_t>(k)]
                                                   : local[static_cast<std::size_t>(k)];
  return z;
}

inline double cap_probability(int d, double radius) {
  if (radius >= std::numbers::pi) return 1.0;
  if (d == 2) return radius / std::numbers::pi;
  if (d == 3) return 0.5 * (1.0 - std::cos(radius));
  throw std::invalid_argument("cap_probability: d must be 2 or 3");
}

/// Monte Carlo value of the covering density sum_j (1/sigma_j) int 1_{Omega_{j,z}}(x) dz.
///
/// The inner ball is one set of weight one. Numerator and sigma_j are both
/// sampled from the Haar law restricted to frames that can reach the point
/// (resp. e1); the restriction probability cancels in the ratio. In d = 2 the
/// closed form of sigma_j is used unless `mc_sigma` is set.
inline McEstimate covering_weight(std::span<const double> x, const ShellSchedule& s, std::size_t frames,
                                  std::uint64_t seed, bool mc_sigma = false) {
  double r2 = 0.0;
  for (const double v : x) r2 += v * v;
  const auto j = s.shell_of(std::sqrt(r2));
  if (j == 0) throw std::domain_error("covering_weight: point outside the covered ball");
  if (frames == 0) throw std::invalid_argument("covering_weight: no frames");
  McEstimate out;
  if (j == 1) {
    out.estimate = 1.0;
    out.exact = 1.0;
    return out;
  }
  const int d = static_cast<int>(x.size());
  const double delta = s.delta[j - 1];
  const double reach = 0.5 * delta * std::sqrt(static_cast<double>(d - 1));
  const double cap = cap_probability(d, reach);
  std::vector<double> xh(x.begin(), x.end());
  for (auto& v : xh) v /= std::sqrt(r2);
  std::vector<double> e1(static_cast<std::size_t>(d), 0.0);
  e1[0] = 1.0;
  auto hit_rate = [&](std::span<const double> target, std::uint64_t stream) {
    auto rng = make_rng(seed, stream);
    std::size_t hits = 0;
    for (std::size_t f = 0; f < frames; ++f)
      if (cap_membership(target, sample_frame_near(target, reach, rng), delta)) ++hits;
    const double pr = static_cast<double>(hits) / static_cast<double>(frames);
    return std::pair{pr, std::sqrt(pr * (1.0 - pr) / static_cast<double>(frames))};
  };
  const auto [a, se_a] = hit_rate(xh, 2 * j);
  double b = 0.0, se_b = 0.0;
  if (d == 2 && !mc_sigma) {
    b = delta / (2.0 * std::numbers::pi) / cap;
  } else {
    std::tie(b, se_b) = hit_rate(e1, 2 * j + 1);
  }
  if (!(b > 0.0)) throw std::runtime_error("covering_weight: no frame reached e1; increase frames");
  out.estimate = a / b;
  out.se = a > 0.0 ? out.estimate * std::sqrt((se_a / a) * (se_a / a) + (se_b / b) * (se_b / b)) : se_a / b;
  return out;
}

}  // namespace matchlab
