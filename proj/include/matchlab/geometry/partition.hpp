#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "matchlab/density/potential.hpp"
#include "matchlab/density/radial_law.hpp"
#include "matchlab/geometry/shells.hpp"
#include "matchlab/geometry/sphere_partition.hpp"

namespace matchlab {

/// Disjoint cells tiling B_{R_n}: the inner ball B_{r_1}, then each shell
/// [r_{j-1}, r_j) cut into K equal-measure angular cells.
class ExactPartition {
 public:
  struct Cell {
    std::size_t j;  // shell index, 1 for the inner ball
    double r_lo, r_hi;
    std::size_t angular;  // index into the sphere partition (0 for the ball)
  };
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  ExactPartition(const ShellSchedule& s, int d, std::size_t arcs) : d_(d), k_(arcs), sphere_(d, arcs), r_(s.r) {
    if (d != 2 && d != 3) throw std::invalid_argument("exact_partition: d must be 2 or 3");
    cells_.push_back({1, 0.0, r_.front(), 0});
    for (std::size_t j = 2; j <= r_.size(); ++j)
      for (std::size_t a = 0; a < arcs; ++a) cells_.push_back({j, r_[j - 2], r_[j - 1], a});
  }

  [[nodiscard]] int dim() const { return d_; }
  [[nodiscard]] std::size_t arcs() const { return k_; }
  [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }
  [[nodiscard]] std::size_t size() const { return cells_.size(); }
  [[nodiscard]] const SpherePartition& sphere() const { return sphere_; }
  /// Zonal cells in d = 3 have equal area but are only approximately congruent.
  [[nodiscard]] bool approximate_congruence() const { return d_ == 3 && k_ > 2; }

  [[nodiscard]] std::size_t cell_of(std::span<const double> x) const {
    double r2 = 0.0;
    for (const double v : x) r2 += v * v;
    const double r = std::sqrt(r2);
    if (r < r_.front()) return 0;
    if (r >= r_.back()) return r == r_.back() ? index(r_.size(), sphere_.cell_of(unit(x, r))) : npos;
    std::size_t lo = 0, hi = r_.size() - 1;
    while (hi - lo > 1) {
      const auto mid = (lo + hi) / 2;
      (r_[mid] <= r ? lo : hi) = mid;
    }
    return index(hi + 1, sphere_.cell_of(unit(x, r)));
  }

  [[nodiscard]] double volume(std::size_t c) const {
    const auto& cell = cells_[c];
    const double v = unit_ball_volume(d_) * (std::pow(cell.r_hi, d_) - std::pow(cell.r_lo, d_));
    return cell.j == 1 ? v : v / static_cast<double>(k_);
  }

  /// Mass of a cell under a radial law.
  [[nodiscard]] double mass(std::size_t c, const RadialLaw& law) const {
    const auto& cell = cells_[c];
    const double m = cell.j == 1 ? law.cdf(cell.r_hi) : law.sf(cell.r_lo) - law.sf(cell.r_hi);
    return cell.j == 1 ? m : m / static_cast<double>(k_);
  }

 private:
  [[nodiscard]] std::size_t index(std::size_t j, std::size_t a) const { return 1 + (j - 2) * k_ + a; }
  [[nodiscard]] std::vector<double> unit(std::span<const double> x, double r) const {
    std::vector<double> u(x.begin(), x.end());
    for (auto& v : u) v /= r;
    return u;
  }

  int d_;
  std::size_t k_;
  SpherePartition sphere_;
  std::vector<double> r_;
  std::vector<Cell> cells_;
};

inline ExactPartition exact_partition(const ShellSchedule& s, int d, std::size_t arcs) {
  return ExactPartition(s, d, arcs);
}

}  // namespace matchlab
