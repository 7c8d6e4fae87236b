#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include "matchlab/density/radial_law.hpp"
#include "matchlab/ot/quantization.hpp"
#include "matchlab/ot/solvers.hpp"

namespace matchlab::ot {

/// The quantization budget cannot meet the requested relative accuracy.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SemiDiscreteResult {
  double cost = 0.0;          // W_p^p (or Wb^p) against the quantized density
  double error_radius = 0.0;  // |true - cost| <= error_radius
  double quantization = 0.0;  // n * sum_cells int |x - c|^p rho
  std::size_t atoms = 0;
  SolveStats stats;
};

/// Largest gap between W^p and a value whose p-th root is within e^{1/p} of W^{1/p}.
inline double error_radius(double cost, double quantization, double p) {
  const double a = std::pow(std::max(cost, 0.0), 1.0 / p);
  const double e = std::pow(std::max(quantization, 0.0), 1.0 / p);
  return std::pow(a + e, p) - std::pow(a, p);
}

namespace detail {

inline DiscreteMeasure scaled_atoms(const Quantization& q, double mass) {
  DiscreteMeasure nu = q.atoms;
  for (auto& w : nu.weights) w *= mass;
  return nu;
}

inline void check_target(const SemiDiscreteResult& r, std::optional<double> rel_target) {
  if (rel_target && r.error_radius > *rel_target * r.cost)
    throw BudgetError("atom budget too small for the requested error target");
}

}  // namespace detail

/// W_p^p(sample, total mass x density) through an M-atom quantization.
inline SemiDiscreteResult semidiscrete_cost(const DiscreteMeasure& sample, const Quantization& q,
                                            std::optional<double> rel_target = std::nullopt,
                                            std::size_t atom_cap = default_atom_cap) {
  if (q.atoms.dim != sample.dim) throw std::invalid_argument("semidiscrete_cost: dimension mismatch");
  const double n = sample.total();
  const auto res = wp(sample, detail::scaled_atoms(q, n), q.p, Metric::euclidean, atom_cap);
  SemiDiscreteResult out;
  out.cost = res.cost;
  out.stats = res.stats;
  out.atoms = q.atoms.size();
  out.quantization = n * q.moment_error;
  out.error_radius = error_radius(out.cost, out.quantization, q.p);
  detail::check_target(out, rel_target);
  return out;
}

inline SemiDiscreteResult semidiscrete_cost(const DiscreteMeasure& sample, const RadialLaw& law, double p,
                                            std::size_t M, std::optional<double> rel_target = std::nullopt,
                                            std::size_t atom_cap = default_atom_cap) {
  if (M < sample.size()) throw std::invalid_argument("semidiscrete_cost: atom budget below sample size");
  if (law.dim() != sample.dim) throw std::invalid_argument("semidiscrete_cost: dimension mismatch");
  return semidiscrete_cost(sample, quantize_radial(law, M, p), rel_target, atom_cap);
}

/// Wb^p on a domain against a quantized density (Wb^{1/p} is a metric, so the
/// same error radius applies).
inline SemiDiscreteResult semidiscrete_boundary_cost(const DiscreteMeasure& sample, const Quantization& q,
                                                     const Domain& domain, double mass,
                                                     std::optional<double> rel_target = std::nullopt,
                                                     std::size_t atom_cap = default_atom_cap) {
  const auto res = wb(sample, detail::scaled_atoms(q, mass), q.p, domain, atom_cap);
  SemiDiscreteResult out;
  out.cost = res.cost;
  out.stats = res.stats;
  out.atoms = q.atoms.size();
  out.quantization = mass * q.moment_error;
  out.error_radius = error_radius(out.cost, out.quantization, q.p);
  detail::check_target(out, rel_target);
  return out;
}

}  // namespace matchlab::ot
