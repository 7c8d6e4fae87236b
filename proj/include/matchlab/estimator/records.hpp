#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchlab/core/stats.hpp"
#include "matchlab/density/radial_law.hpp"
#include "matchlab/rates.hpp"

namespace matchlab::estimator {

/// Requested instance exceeds the desk-scale caps.
class CapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Caps {
  std::size_t semidiscrete_n = 30000;
  std::size_t lp_n = 4000;
  std::size_t atoms = 120000;
};

inline void require_cap(std::size_t value, std::size_t cap, const char* what) {
  if (value > cap) throw CapError(std::string(what) + " exceeds the solver cap (" + std::to_string(cap) + ")");
}

/// exp(-scale |x|^q / q), normalized; "gaussian" fixes q = 2, scale = 1.
struct LawSpec {
  std::string kind = "gaussian";
  int d = 2;
  double q = 2.0;
  double scale = 1.0;

  [[nodiscard]] PowerPotential potential() const {
    if (kind != "gaussian" && kind != "power") throw std::invalid_argument("unknown density kind: " + kind);
    PowerPotential v{kind == "gaussian" ? 2.0 : q, kind == "gaussian" ? 1.0 : scale, 0.0, d};
    return normalize(v);
  }
  [[nodiscard]] double exponent() const { return kind == "gaussian" ? 2.0 : q; }
  [[nodiscard]] std::shared_ptr<const RadialDensity> law() const {
    return std::make_shared<const RadialDensity>(potential());
  }
};

struct ExperimentRecord {
  LawSpec law;
  int d = 0;
  double p = 0.0;
  double q = 0.0;
  std::size_t n = 0;
  double eps = 0.1;
  std::uint64_t seed = 0;
  std::size_t replicate = 0;
  std::string measure = "wp";  // wp | wb | sphere
  double cost = 0.0;
  RatePrediction predicted;
  std::size_t atoms = 0;
  double error_radius = 0.0;
  double wall_ms = 0.0;
  bool flagged = false;
};

/// Log-log regression of mean cost on n plus the ratio sequence to tau_n.
struct FitResult {
  std::vector<double> n;
  std::vector<double> mean, se;
  std::vector<double> ratio, ratio_se;
  double exponent = 0.0, exponent_se = 0.0;
  double prefactor = 0.0, prefactor_se = 0.0;  // last ratio
  double residual_sd = 0.0;
  double band = 0.0;  // max ratio / min ratio
  bool monotone = false;
};

/// Nondecreasing within one joint standard error at each step.
inline bool monotone_within_se(const std::vector<double>& r, const std::vector<double>& se) {
  for (std::size_t k = 0; k + 1 < r.size(); ++k)
    if (r[k + 1] < r[k] - std::sqrt(se[k] * se[k] + se[k + 1] * se[k + 1])) return false;
  return true;
}

/// Fits the (n, cost) table; `scale` gives the rate each ratio divides by.
template <class Rate>
FitResult fit_costs(const std::vector<double>& ns, const std::vector<std::vector<double>>& costs, Rate&& scale) {
  if (ns.size() != costs.size() || ns.empty()) throw std::invalid_argument("fit_costs: need one cost list per n");
  FitResult f;
  f.n = ns;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const auto s = summarize(costs[k]);
    f.mean.push_back(s.mean);
    f.se.push_back(s.se);
    const double t = scale(ns[k]);
    f.ratio.push_back(s.mean / t);
    f.ratio_se.push_back(s.se / t);
    lx.push_back(std::log(ns[k]));
    ly.push_back(std::log(s.mean));
  }
  if (ns.size() >= 2) {
    const auto lf = fit_line(lx, ly);
    f.exponent = lf.slope;
    f.exponent_se = lf.slope_se;
    f.residual_sd = lf.residual_sd;
  } else {
    f.exponent = f.exponent_se = std::nan("");
  }
  f.prefactor = f.ratio.back();
  f.prefactor_se = f.ratio_se.back();
  double lo = f.ratio.front(), hi = f.ratio.front();
  for (const double r : f.ratio) lo = std::min(lo, r), hi = std::max(hi, r);
  f.band = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  f.monotone = monotone_within_se(f.ratio, f.ratio_se);
  return f;
}

}  // namespace matchlab::estimator
