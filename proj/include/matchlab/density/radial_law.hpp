#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "matchlab/core/quadrature.hpp"
#include "matchlab/core/random.hpp"
#include "matchlab/density/potential.hpp"

namespace matchlab {

/// Law of a radially symmetric density on R^d, seen through its radius.
class RadialLaw {
 public:
  virtual ~RadialLaw() = default;
  [[nodiscard]] virtual int dim() const = 0;
  /// Density value rho(x) at |x| = t.
  [[nodiscard]] virtual double density(double t) const = 0;
  [[nodiscard]] virtual double cdf(double t) const = 0;
  /// 1 - cdf, accurate in the tail.
  [[nodiscard]] virtual double sf(double t) const = 0;
  [[nodiscard]] virtual double quantile(double u) const = 0;
  /// Radius with sf(t) = s, accurate for small s.
  [[nodiscard]] virtual double sf_quantile(double s) const = 0;
  /// Radius beyond which the remaining mass is zero (or below 1e-17).
  [[nodiscard]] virtual double support_end() const = 0;
  /// Radii where the density jumps.
  [[nodiscard]] virtual std::vector<double> breakpoints() const { return {}; }

  /// Density of |X|: |S^{d-1}| t^{d-1} rho(t).
  [[nodiscard]] double radial_pdf(double t) const {
    if (t < 0.0) return 0.0;
    const int d = dim();
    const double area = sphere_area(d);
    return d == 1 ? area * density(t) : area * std::pow(t, d - 1) * density(t);
  }

  /// Integral of t^k over the radial law restricted to [a, b].
  [[nodiscard]] double partial_moment(double a, double b, double k) const {
    a = std::max(a, 0.0);
    b = std::min(b, support_end());
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a};
    for (const double c : breakpoints())
      if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      auto f = [&](double t) { return (k == 0.0 ? 1.0 : std::pow(t, k)) * radial_pdf(t); };
      total += integrate(f, cuts[i], cuts[i + 1], 1e-12, "partial_moment");
    }
    return total;
  }

  /// E|X|^p.
  [[nodiscard]] double moment(double p) const {
    if (p < 0.0) throw std::invalid_argument("moment order must be nonnegative");
    return partial_moment(0.0, support_end(), p);
  }

  /// n i.i.d. points (row-major n x d); radius by inversion, direction uniform.
  [[nodiscard]] std::vector<double> sample(std::size_t n, Rng& rng) const {
    const auto d = static_cast<std::size_t>(dim());
    std::vector<double> out(n * d);
    for (std::size_t i = 0; i < n; ++i) {
      std::span<double> x(out.data() + i * d, d);
      random_direction(rng, x);
      const double r = quantile(uniform_open(rng));
      for (auto& v : x) v *= r;
    }
    return out;
  }
};

/// exp(-V(|x|)) for a normalized power potential, with the radial CDF and
/// log-survival tabulated as cubic Hermite splines (slopes are exact).
class RadialDensity final : public RadialLaw {
 public:
  explicit RadialDensity(PowerPotential v, std::size_t nodes = 3000) : v_(v) {
    v_.validate();
    if (nodes < 16) throw std::invalid_argument("RadialDensity: too few nodes");
    const double t0 = std::pow(v_.q / v_.scale, 1.0 / v_.q);
    auto tail = [&](double t) {
      return integrate([&](double s) { return radial_pdf(s); }, t, std::numeric_limits<double>::infinity(), 1e-10,
                       "radial tail");
    };
    end_ = t0;
    while (tail(end_) > 1e-17) end_ *= 1.25;
    n_ = nodes;
    t_.resize(n_ + 1);
    for (std::size_t k = 0; k <= n_; ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(n_);
      t_[k] = end_ * s * s;
    }
    std::vector<double> piece(n_);
    for (std::size_t k = 0; k < n_; ++k)
      piece[k] = gauss_rule<20>([&](double s) { return radial_pdf(s); }, t_[k], t_[k + 1]);
    const double beyond = tail(end_);
    double total = beyond;
    for (const double w : piece) total += w;
    if (std::abs(total - 1.0) > 1e-8)
      throw std::invalid_argument("RadialDensity: potential is not normalized");
    F_.assign(n_ + 1, 0.0);
    S_.assign(n_ + 1, 0.0);
    for (std::size_t k = 0; k < n_; ++k) F_[k + 1] = F_[k] + piece[k] / total;
    S_[n_] = beyond / total;
    for (std::size_t k = n_; k-- > 0;) S_[k] = S_[k + 1] + piece[k] / total;
    f_.resize(n_ + 1);
    logS_.resize(n_ + 1);
    dlogS_.resize(n_ + 1);
    for (std::size_t k = 0; k <= n_; ++k) {
      f_[k] = radial_pdf(t_[k]) / total;
      logS_[k] = std::log(std::max(S_[k], std::numeric_limits<double>::min()));
      dlogS_[k] = S_[k] > 0.0 ? -f_[k] / S_[k] : dlogS_[k - 1];
    }
  }

  [[nodiscard]] const PowerPotential& potential() const { return v_; }
  [[nodiscard]] int dim() const override { return v_.d; }
  [[nodiscard]] double density(double t) const override { return v_.density(t); }
  [[nodiscard]] double support_end() const override { return end_; }

  [[nodiscard]] double cdf(double t) const override {
    if (t <= 0.0) return 0.0;
    if (t >= end_) return 1.0 - sf(t);
    const auto k = cell(t);
    return hermite(t, k, F_, f_);
  }

  [[nodiscard]] double sf(double t) const override {
    if (t <= 0.0) return 1.0;
    if (t >= end_) return std::exp(log_tail(t));
    const auto k = cell(t);
    return std::exp(hermite(t, k, logS_, dlogS_));
  }

  [[nodiscard]] double quantile(double u) const override {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile: u outside [0,1]");
    if (u >= 0.5) return sf_quantile(1.0 - u);
    if (u == 0.0) return 0.0;
    const auto it = std::upper_bound(F_.begin(), F_.end(), u);
    const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - F_.begin()) - 1));
    return invert(k, u, F_, f_);
  }

  [[nodiscard]] double sf_quantile(double s) const override {
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("sf_quantile: s outside [0,1]");
    if (s == 1.0) return 0.0;
    if (s == 0.0) return std::numeric_limits<double>::infinity();
    const double ls = std::log(s);
    if (ls <= logS_[n_]) {
      double lo = end_, hi = 2.0 * end_;
      while (log_tail(hi) > ls) hi *= 2.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (log_tail(mid) > ls ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    // logS_ is decreasing: first node with logS <= ls.
    const auto it = std::lower_bound(logS_.begin(), logS_.end(), ls, [](double a, double b) { return a > b; });
    const auto k = static_cast<std::size_t>((it - logS_.begin()) - 1);
    return invert(k, ls, logS_, dlogS_);
  }

 private:
  // Beyond the grid: S(t) ~ S(end) (t/end)^{d-q} exp(V(end) - V(t)).
  [[nodiscard]] double log_tail(double t) const {
    return logS_[n_] + (v_.d - v_.q) * std::log(t / end_) - (v_(t) - v_(end_));
  }

  [[nodiscard]] std::size_t cell(double t) const {
    auto k = static_cast<std::size_t>(std::sqrt(t / end_) * static_cast<double>(n_));
    k = std::min(k, n_ - 1);
    while (k > 0 && t < t_[k]) --k;
    while (k + 1 < n_ && t >= t_[k + 1]) ++k;
    return k;
  }

  [[nodiscard]] double hermite(double t, std::size_t k, const std::vector<double>& y,
                               const std::vector<double>& dy) const {
    const double h = t_[k + 1] - t_[k];
    const double s = (t - t_[k]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y[k] + (s3 - 2 * s2 + s) * h * dy[k] + (-2 * s3 + 3 * s2) * y[k + 1] +
           (s3 - s2) * h * dy[k + 1];
  }

  [[nodiscard]] double hermite_slope(double t, std::size_t k, const std::vector<double>& y,
                                     const std::vector<double>& dy) const {
    const double h = t_[k + 1] - t_[k];
    const double s = (t - t_[k]) / h;
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * (y[k] - y[k + 1]) / h + (3 * s2 - 4 * s + 1) * dy[k] + (3 * s2 - 2 * s) * dy[k + 1]);
  }

  // Solve hermite(t) = target on cell k; safeguarded Newton.
  [[nodiscard]] double invert(std::size_t k, double target, const std::vector<double>& y,
                              const std::vector<double>& dy) const {
    double lo = t_[k], hi = t_[k + 1];
    const bool increasing = y[k + 1] >= y[k];
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
      const double g = hermite(t, k, y, dy) - target;
      if ((g < 0.0) == increasing) lo = t;
      else hi = t;
      const double slope = hermite_slope(t, k, y, dy);
      double next = slope != 0.0 ? t - g / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - t) <= 1e-15 * std::max(1.0, t) || hi - lo <= 1e-15 * std::max(1.0, hi)) return next;
      t = next;
    }
    return t;
  }

  PowerPotential v_;
  double end_ = 0.0;
  std::size_t n_ = 0;
  std::vector<double> t_, F_, S_, f_, logS_, dlogS_;
};

/// rho on B_{R'}, boost * rho on R' <= |x| <= R, zero outside.
class TruncatedDensity final : public RadialLaw {
 public:
  TruncatedDensity(std::shared_ptr<const RadialLaw> base, double r_prime, double r_outer)
      : base_(std::move(base)), r_prime_(r_prime), r_outer_(r_outer) {
    if (!base_) throw std::invalid_argument("TruncatedDensity: missing base law");
    if (!(r_prime >= 0.0 && r_prime < r_outer)) throw std::invalid_argument("TruncatedDensity: need R' < R");
    s_prime_ = base_->sf(r_prime_);
    s_outer_ = base_->sf(r_outer_);
    boost_ = s_prime_ / (s_prime_ - s_outer_);
  }

  [[nodiscard]] const RadialLaw& base() const { return *base_; }
  [[nodiscard]] double r_prime() const { return r_prime_; }
  [[nodiscard]] double r_outer() const { return r_outer_; }
  /// (1 - F(R')) / (F(R) - F(R')).
  [[nodiscard]] double boost() const { return boost_; }

  [[nodiscard]] int dim() const override { return base_->dim(); }
  [[nodiscard]] double density(double t) const override {
    if (t < r_prime_) return base_->density(t);
    if (t <= r_outer_) return boost_ * base_->density(t);
    return 0.0;
  }
  [[nodiscard]] double cdf(double t) const override {
    if (t < r_prime_) return base_->cdf(t);
    return 1.0 - sf(t);
  }
  [[nodiscard]] double sf(double t) const override {
    if (t < r_prime_) return base_->sf(t);
    if (t >= r_outer_) return 0.0;
    return boost_ * (base_->sf(t) - s_outer_);
  }
  [[nodiscard]] double quantile(double u) const override {
    if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile: u outside [0,1]");
    if (1.0 - u > s_prime_) return base_->quantile(u);
    return sf_quantile(1.0 - u);
  }
  [[nodiscard]] double sf_quantile(double s) const override {
    if (s >= s_prime_) return base_->sf_quantile(s);
    if (s <= 0.0) return r_outer_;
    return std::min(r_outer_, base_->sf_quantile(s_outer_ + s / boost_));
  }
  [[nodiscard]] double support_end() const override { return r_outer_; }
  [[nodiscard]] std::vector<double> breakpoints() const override { return {r_prime_}; }

 private:
  std::shared_ptr<const RadialLaw> base_;
  double r_prime_, r_outer_;
  double s_prime_ = 0.0, s_outer_ = 0.0, boost_ = 1.0;
};

}  // namespace matchlab
