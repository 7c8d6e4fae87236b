#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace matchlab {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n-1)
  double se = 0.0;  // standard error of the mean
};

inline Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  // Welford
  double m = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (const double x : xs) {
    ++k;
    const double dx = x - m;
    m += dx / static_cast<double>(k);
    m2 += dx * (x - m);
  }
  s.mean = m;
  if (k > 1) {
    s.sd = std::sqrt(m2 / static_cast<double>(k - 1));
    s.se = s.sd / std::sqrt(static_cast<double>(k));
  }
  return s;
}

/// Ordinary least squares y = a + b x with standard errors.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
  double residual_sd = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: degenerate abscissae");
  LinearFit f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  if (x.size() > 2) {
    const double s2 = rss / (n - 2.0);
    f.residual_sd = std::sqrt(s2);
    f.slope_se = std::sqrt(s2 / sxx);
    f.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  }
  return f;
}

/// Weighted least squares with known per-point standard deviations.
inline LinearFit fit_line_weighted(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> sigma) {
  if (x.size() != y.size() || x.size() != sigma.size()) throw std::invalid_argument("fit_line_weighted: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("fit_line_weighted: need at least two points");
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(sigma[i] > 0.0)) return fit_line(x, y);
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = 1.0 / (sigma[i] * sigma[i]);
    sxx += w * (x[i] - mx) * (x[i] - mx);
    sxy += w * (x[i] - mx) * (y[i] - my);
    syy += w * (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line_weighted: degenerate abscissae");
  LinearFit f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = (y[i] - f.intercept - f.slope * x[i]) / sigma[i];
    chi2 += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - chi2 / syy : 1.0;
  f.residual_sd = x.size() > 2 ? std::sqrt(chi2 / (static_cast<double>(x.size()) - 2.0)) : 0.0;
  f.slope_se = std::sqrt(1.0 / sxx);
  f.intercept_se = std::sqrt(1.0 / sw + mx * mx / sxx);
  return f;
}

}  // namespace matchlab
