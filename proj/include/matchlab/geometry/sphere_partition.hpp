#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace matchlab {

/// Partition of S^{d-1} (d = 1, 2, 3) into cells of equal measure.
///
/// d = 1: the two points +-1 (count 1 or 2). d = 2: equal arcs. d = 3: zonal
/// bands of equal polar-angle width, each split into equal longitude sectors,
/// with band edges moved so that every cell has area exactly 4 pi / count.
class SpherePartition {
 public:
  struct Band {
    double z_lo, z_hi;  // z = cos(polar angle), z_lo < z_hi
    std::size_t first;  // index of the first cell in the band
    std::size_t cells;
  };

  SpherePartition(int d, std::size_t count) : d_(d), count_(count) {
    if (count == 0) throw std::invalid_argument("SpherePartition: empty partition");
    if (d == 1 && count > 2) throw std::invalid_argument("SpherePartition: S^0 has two points");
    if (d < 1 || d > 3) throw std::invalid_argument("SpherePartition: unsupported dimension");
    if (d == 3) build_bands();
  }

  [[nodiscard]] int dim() const { return d_; }
  [[nodiscard]] std::size_t size() const { return count_; }
  [[nodiscard]] const std::vector<Band>& bands() const { return bands_; }

  [[nodiscard]] std::size_t cell_of(std::span<const double> u) const {
    if (count_ == 1) return 0;
    if (d_ == 1) return u[0] >= 0.0 ? 0 : 1;
    if (d_ == 2) return arc_index(std::atan2(u[1], u[0]), count_);
    const double z = std::clamp(u[2], -1.0, 1.0);
    // Bands are stored from the south pole up.
    std::size_t b = 0;
    while (b + 1 < bands_.size() && z >= bands_[b].z_hi) ++b;
    return bands_[b].first + arc_index(std::atan2(u[1], u[0]), bands_[b].cells);
  }

  /// Mean of the unit vector over cell k (uniform measure on the cell).
  [[nodiscard]] std::array<double, 3> mean_direction(std::size_t k) const {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    if (d_ == 1) {
      c[0] = count_ == 1 ? 0.0 : (k == 0 ? 1.0 : -1.0);
      return c;
    }
    if (d_ == 2) {
      const double w = 2.0 * std::numbers::pi / static_cast<double>(count_);
      const double mid = -std::numbers::pi + (static_cast<double>(k) + 0.5) * w;
      const double f = count_ == 1 ? 0.0 : std::sin(0.5 * w) / (0.5 * w);
      c[0] = f * std::cos(mid);
      c[1] = f * std::sin(mid);
      return c;
    }
    const auto& b = band_of(k);
    const auto [phi_lo, phi_hi] = longitude(k);
    const double w = phi_hi - phi_lo;
    const double mid = 0.5 * (phi_lo + phi_hi);
    const double f = b.cells == 1 ? 0.0 : std::sin(0.5 * w) / (0.5 * w);
    auto g = [](double z) { return 0.5 * (z * std::sqrt(std::max(0.0, 1.0 - z * z)) + std::asin(z)); };
    const double s = (g(b.z_hi) - g(b.z_lo)) / (b.z_hi - b.z_lo);  // mean of sqrt(1 - z^2)
    c[0] = s * f * std::cos(mid);
    c[1] = s * f * std::sin(mid);
    c[2] = 0.5 * (b.z_lo + b.z_hi);
    return c;
  }

  /// Angular interval of cell k: arc [lo, hi) for d = 2, longitude for d = 3.
  [[nodiscard]] std::array<double, 2> longitude(std::size_t k) const {
    if (d_ == 2) {
      const double w = 2.0 * std::numbers::pi / static_cast<double>(count_);
      return {-std::numbers::pi + static_cast<double>(k) * w, -std::numbers::pi + static_cast<double>(k + 1) * w};
    }
    const auto& b = band_of(k);
    const double w = 2.0 * std::numbers::pi / static_cast<double>(b.cells);
    const auto i = static_cast<double>(k - b.first);
    return {-std::numbers::pi + i * w, -std::numbers::pi + (i + 1.0) * w};
  }

  [[nodiscard]] const Band& band_of(std::size_t k) const {
    for (const auto& b : bands_)
      if (k < b.first + b.cells) return b;
    throw std::out_of_range("SpherePartition: cell index");
  }

  /// Classes of congruent cells (same band); one representative each.
  [[nodiscard]] std::vector<std::size_t> representatives() const {
    if (d_ == 3) {
      std::vector<std::size_t> out;
      for (const auto& b : bands_) out.push_back(b.first);
      return out;
    }
    return {0};
  }

 private:
  static std::size_t arc_index(double angle, std::size_t m) {
    const double w = 2.0 * std::numbers::pi / static_cast<double>(m);
    auto k = static_cast<std::ptrdiff_t>(std::floor((angle + std::numbers::pi) / w));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(m) - 1));
  }

  void build_bands() {
    const auto c = static_cast<double>(count_);
    auto nb = static_cast<std::size_t>(std::lround(0.5 * std::sqrt(std::numbers::pi * c)));
    nb = std::clamp<std::size_t>(nb, 1, count_);
    // Target counts from band areas (equal polar-angle width), largest remainder.
    std::vector<double> share(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      const double t0 = std::numbers::pi * static_cast<double>(b) / static_cast<double>(nb);
      const double t1 = std::numbers::pi * static_cast<double>(b + 1) / static_cast<double>(nb);
      share[b] = 0.5 * (std::cos(t0) - std::cos(t1)) * c;
    }
    std::vector<std::size_t> cnt(nb);
    std::size_t used = 0;
    for (std::size_t b = 0; b < nb; ++b) {
      cnt[b] = static_cast<std::size_t>(std::floor(share[b]));
      used += cnt[b];
    }
    std::vector<std::size_t> order(nb);
    for (std::size_t b = 0; b < nb; ++b) order[b] = b;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return share[a] - std::floor(share[a]) > share[b] - std::floor(share[b]);
    });
    for (std::size_t k = 0; used < count_; ++k, ++used) ++cnt[order[k % nb]];
    std::vector<std::size_t> kept;
    for (const auto n : cnt)
      if (n > 0) kept.push_back(n);
    // Band edges from cumulative counts; bands listed from z = -1 upwards.
    std::size_t acc = 0;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      Band b;
      b.first = acc;
      b.cells = *it;
      b.z_lo = -1.0 + 2.0 * static_cast<double>(acc) / c;
      acc += *it;
      b.z_hi = -1.0 + 2.0 * static_cast<double>(acc) / c;
      bands_.push_back(b);
    }
    bands_.back().z_hi = 1.0;
  }

  int d_;
  std::size_t count_;
  std::vector<Band> bands_;
};

}  // namespace matchlab
