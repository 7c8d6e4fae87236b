#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace matchlab {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive Gauss-Kronrod on [a, b] (b may be +inf); throws when the error
/// estimate reaches neither the relative nor the absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12, const char* what = "integral",
                 double abs_tol = 1e-12) {
  double err = 0.0;
  double l1 = 0.0;
  double v = 0.0;
  if (std::isfinite(a) && std::isfinite(b) && b > a) {
    // Map to [0, 1] at unit scale; the library's error floor is absolute.
    const double w = b - a;
    double scale = 0.0;
    const auto& x = boost::math::quadrature::gauss<double, 20>::abscissa();
    const auto& gw = boost::math::quadrature::gauss<double, 20>::weights();
    for (std::size_t i = 0; i < x.size(); ++i)
      scale += gw[i] * (std::abs(f(a + 0.5 * w * (1 - x[i]))) + std::abs(f(a + 0.5 * w * (1 + x[i]))));
    scale *= 0.5 * w;
    if (!(scale > 0.0) || !std::isfinite(scale)) scale = 1.0;
    auto g = [&](double s) { return f(a + w * s) * (w / scale); };
    v = scale * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 20, rel_tol, &err, &l1);
    err *= scale;
    l1 *= scale;
  } else {
    v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &err, &l1);
  }
  if (!std::isfinite(v) || err > std::max(1e3 * rel_tol * l1, abs_tol))
    throw QuadratureError(std::string(what) + ": quadrature did not converge");
  return v;
}

/// Fixed N-point Gauss-Legendre rule on [a, b].
template <unsigned N, class F>
double gauss_rule(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, N>::integrate(f, a, b);
}

}  // namespace matchlab
