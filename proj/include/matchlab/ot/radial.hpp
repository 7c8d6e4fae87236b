#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "matchlab/core/quadrature.hpp"
#include "matchlab/density/radial_law.hpp"
#include "matchlab/ot/geometric_cost.hpp"

namespace matchlab::ot {

/// A probability density on an interval (lo, hi) with CDF and quantile.
class Density1D {
 public:
  virtual ~Density1D() = default;
  [[nodiscard]] virtual double lo() const = 0;
  [[nodiscard]] virtual double hi() const = 0;
  [[nodiscard]] virtual double pdf(double r) const = 0;
  [[nodiscard]] virtual double cdf(double r) const = 0;
  [[nodiscard]] virtual double quantile(double u) const = 0;
  [[nodiscard]] virtual std::vector<double> breakpoints() const { return {}; }
};

class UniformInterval final : public Density1D {
 public:
  UniformInterval(double a, double b) : a_(a), b_(b) {
    if (!(b > a)) throw std::invalid_argument("UniformInterval: empty interval");
  }
  [[nodiscard]] double lo() const override { return a_; }
  [[nodiscard]] double hi() const override { return b_; }
  [[nodiscard]] double pdf(double r) const override { return r >= a_ && r <= b_ ? 1.0 / (b_ - a_) : 0.0; }
  [[nodiscard]] double cdf(double r) const override { return std::clamp((r - a_) / (b_ - a_), 0.0, 1.0); }
  [[nodiscard]] double quantile(double u) const override { return a_ + u * (b_ - a_); }

 private:
  double a_, b_;
};

/// Law of |X| for a radial law with bounded support.
class RadialMarginal final : public Density1D {
 public:
  explicit RadialMarginal(std::shared_ptr<const RadialLaw> law) : law_(std::move(law)) {}
  [[nodiscard]] double lo() const override { return 0.0; }
  [[nodiscard]] double hi() const override { return law_->support_end(); }
  [[nodiscard]] double pdf(double r) const override { return law_->radial_pdf(r); }
  [[nodiscard]] double cdf(double r) const override { return law_->cdf(r); }
  [[nodiscard]] double quantile(double u) const override { return law_->quantile(u); }
  [[nodiscard]] std::vector<double> breakpoints() const override { return law_->breakpoints(); }

 private:
  std::shared_ptr<const RadialLaw> law_;
};

/// x -> s x applied to a radial law.
class DilatedLaw final : public RadialLaw {
 public:
  DilatedLaw(std::shared_ptr<const RadialLaw> base, double s) : base_(std::move(base)), s_(s) {
    if (!(s > 0.0)) throw std::invalid_argument("DilatedLaw: factor must be positive");
  }
  [[nodiscard]] int dim() const override { return base_->dim(); }
  [[nodiscard]] double density(double t) const override { return base_->density(t / s_) / std::pow(s_, dim()); }
  [[nodiscard]] double cdf(double t) const override { return base_->cdf(t / s_); }
  [[nodiscard]] double sf(double t) const override { return base_->sf(t / s_); }
  [[nodiscard]] double quantile(double u) const override { return s_ * base_->quantile(u); }
  [[nodiscard]] double sf_quantile(double v) const override { return s_ * base_->sf_quantile(v); }
  [[nodiscard]] double support_end() const override { return s_ * base_->support_end(); }
  [[nodiscard]] std::vector<double> breakpoints() const override {
    auto b = base_->breakpoints();
    for (auto& v : b) v *= s_;
    return b;
  }

 private:
  std::shared_ptr<const RadialLaw> base_;
  double s_;
};

/// Exact W_p^p between two radial probability laws: the monotone radial map
/// is optimal, so the cost is int_0^1 |Q_A(s) - Q_B(s)|^p ds in survival scale.
inline double radial_1d_cost(const RadialLaw& a, const RadialLaw& b, double p, double mass_a = 1.0,
                             double mass_b = 1.0) {
  if (std::abs(mass_a - mass_b) > 1e-12 * std::max(mass_a, mass_b))
    throw std::invalid_argument("radial_1d_cost: unequal masses");
  if (a.dim() != b.dim()) throw std::invalid_argument("radial_1d_cost: dimension mismatch");
  // Split in s at every breakpoint of either law, then geometrically toward s = 0.
  std::vector<double> cuts{0.0, 1.0};
  for (const double r : a.breakpoints()) cuts.push_back(a.sf(r));
  for (const double r : b.breakpoints()) cuts.push_back(b.sf(r));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto f = [&](double s) { return power(std::abs(a.sf_quantile(s) - b.sf_quantile(s)), p); };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k], hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    if (lo == 0.0) {
      // [0, hi]: dyadic pieces down to s = 1e-300.
      double top = hi;
      while (top > 1e-300) {
        const double bottom = top * 0.5;
        total += integrate(f, bottom, top, 1e-10, "radial_1d_cost");
        top = bottom;
        if (top < 1e-60 && f(top) * top < 1e-18 * std::max(total, 1e-300)) break;
      }
    } else {
      total += integrate(f, lo, hi, 1e-10, "radial_1d_cost");
    }
  }
  return mass_a * total;
}

/// Solution of phi'' = sum_i (kappa_i - n) lambda 1_{I_i}, phi'(lo) = phi'(hi) = 0,
/// with kappa_i = counts_i / lambda(I_i).
struct NeumannFlux {
  std::vector<double> edges;            // interval endpoints b_0 < ... < b_k
  std::vector<double> kappa;            // per interval
  std::vector<double> flux_at_edges;    // phi'(b_i)
  double endpoint_residual = 0.0;       // |phi'(b_k)| before it is forced to 0
  double bound = 0.0;                   // int |phi'|^p / (n lambda)^{p-1}
  std::function<double(double)> flux;   // r -> phi'(r)
};

inline NeumannFlux neumann_flux_bound(std::shared_ptr<const Density1D> lambda, std::vector<double> edges,
                                      const std::vector<double>& counts, double n, double p) {
  if (edges.size() != counts.size() + 1 || counts.empty())
    throw std::invalid_argument("neumann_flux_bound: need one count per interval");
  if (!std::is_sorted(edges.begin(), edges.end())) throw std::invalid_argument("neumann_flux_bound: unsorted edges");
  NeumannFlux out;
  const std::size_t k = counts.size();
  out.kappa.resize(k);
  out.flux_at_edges.assign(k + 1, 0.0);
  std::vector<double> cdf_edge(k + 1);
  for (std::size_t i = 0; i <= k; ++i) cdf_edge[i] = lambda->cdf(edges[i]);
  const double total_mass = cdf_edge[k] - cdf_edge[0];
  if (std::abs(total_mass - 1.0) > 1e-8) throw std::invalid_argument("neumann_flux_bound: intervals must carry all of lambda");
  const double total_count = std::accumulate(counts.begin(), counts.end(), 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double m = cdf_edge[i + 1] - cdf_edge[i];
    if (!(m > 0.0)) {
      if (counts[i] != 0.0) throw std::invalid_argument("neumann_flux_bound: atoms in an interval with no mass");
      out.kappa[i] = 0.0;
    } else {
      out.kappa[i] = counts[i] / m;
    }
    out.flux_at_edges[i + 1] = out.flux_at_edges[i] + counts[i] - n * m;
  }
  out.endpoint_residual = std::abs(out.flux_at_edges[k]);
  if (out.endpoint_residual > 1e-8 * std::max(1.0, n) || std::abs(total_count - n) > 1e-8 * std::max(1.0, n))
    throw std::invalid_argument("neumann_flux_bound: counts do not sum to n");
  out.flux_at_edges[k] = 0.0;
  out.edges = edges;
  auto flux = [lambda, edges, cdf_edge, kappa = out.kappa, base = out.flux_at_edges, n](double r) {
    if (r <= edges.front() || r >= edges.back()) return 0.0;
    const auto it = std::upper_bound(edges.begin(), edges.end(), r);
    const auto i = static_cast<std::size_t>(it - edges.begin()) - 1;
    return base[i] + (kappa[i] - n) * (lambda->cdf(r) - cdf_edge[i]);
  };
  out.flux = flux;
  double bound = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(edges[i + 1] > edges[i])) continue;
    auto g = [&](double r) {
      const double dens = n * lambda->pdf(r);
      const double f = std::abs(flux(r));
      if (f == 0.0) return 0.0;
      if (p == 1.0) return f;
      if (!(dens > 0.0)) return std::numeric_limits<double>::infinity();
      return power(f, p) * std::pow(dens, 1.0 - p);
    };
    std::vector<double> cuts{edges[i]};
    for (const double b : lambda->breakpoints())
      if (b > edges[i] && b < edges[i + 1]) cuts.push_back(b);
    cuts.push_back(edges[i + 1]);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) bound += integrate(g, cuts[c], cuts[c + 1], 1e-10, "flux bound");
  }
  out.bound = bound;
  return out;
}

/// Exact W_p^p on the line between sum_i kappa_i lambda 1_{I_i} and n lambda.
inline double rebalanced_cost(const Density1D& lambda, const std::vector<double>& edges,
                              const std::vector<double>& counts, double n, double p) {
  const std::size_t k = counts.size();
  std::vector<double> cdf_edge(k + 1), cum(k + 1, 0.0);
  for (std::size_t i = 0; i <= k; ++i) cdf_edge[i] = lambda.cdf(edges[i]);
  for (std::size_t i = 0; i < k; ++i) cum[i + 1] = cum[i] + counts[i];
  // Inverse CDFs in the mass variable m in [0, n].
  auto qa = [&](double m) {
    auto it = std::upper_bound(cum.begin(), cum.end(), m);
    auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - cum.begin())) - 1;
    i = std::min(i, k - 1);
    while (i + 1 < k && counts[i] == 0.0) ++i;
    const double frac = counts[i] > 0.0 ? (m - cum[i]) / counts[i] : 0.0;
    const double u = cdf_edge[i] + std::clamp(frac, 0.0, 1.0) * (cdf_edge[i + 1] - cdf_edge[i]);
    return lambda.quantile(std::clamp(u, 0.0, 1.0));
  };
  auto qb = [&](double m) { return lambda.quantile(std::clamp(m / n, 0.0, 1.0)); };
  std::vector<double> cuts;
  for (std::size_t i = 0; i <= k; ++i) {
    cuts.push_back(cum[i]);
    cuts.push_back(n * cdf_edge[i]);
  }
  for (const double b : lambda.breakpoints()) cuts.push_back(n * lambda.cdf(b));
  cuts.push_back(0.0);
  cuts.push_back(n);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto g = [&](double m) { return qa(m) - qb(m); };
  auto f = [&](double m) { return power(std::abs(g(m)), p); };
  // Fixed rules on pieces where qa - qb keeps its sign; sign changes found on
  // a 32-point scan are bisected and used as extra cuts.
  auto smooth = [&](double a, double b) {
    constexpr int scan = 32;
    double lo = a, glo = g(a + 1e-12 * (b - a)), sum = 0.0;
    for (int t = 1; t <= scan; ++t) {
      const double x = t == scan ? b : a + (b - a) * t / scan;
      const double gx = g(t == scan ? b - 1e-12 * (b - a) : x);
      if ((glo < 0.0) != (gx < 0.0) && glo != 0.0 && gx != 0.0) {
        double l = a + (b - a) * (t - 1) / scan, r = x;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (l + r);
          ((g(mid) < 0.0) == (glo < 0.0) ? l : r) = mid;
        }
        sum += gauss_rule<20>(f, lo, l);
        lo = l;
        glo = gx;
      }
    }
    return sum + gauss_rule<20>(f, lo, b);
  };
  double total = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = std::max(0.0, cuts[c]), b = std::min(n, cuts[c + 1]);
    if (!(b > a)) continue;
    if (a > 0.0) {
      total += smooth(a, b);
      continue;
    }
    // Quantiles behave like m^{1/d} at 0: dyadic pieces.
    double top = b;
    for (int level = 0; level < 80; ++level) {
      total += smooth(0.5 * top, top);
      top *= 0.5;
    }
  }
  return total;
}

}  // namespace matchlab::ot
