#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace matchlab::ot {

/// Weighted point cloud, row-major coordinates.
struct DiscreteMeasure {
  int dim = 1;
  std::vector<double> points;
  std::vector<double> weights;

  DiscreteMeasure() = default;
  DiscreteMeasure(int d, std::vector<double> pts, std::vector<double> w)
      : dim(d), points(std::move(pts)), weights(std::move(w)) {
    validate();
  }
  /// n unit atoms.
  static DiscreteMeasure unit(int d, std::vector<double> pts) {
    const auto n = pts.size() / static_cast<std::size_t>(d);
    return DiscreteMeasure(d, std::move(pts), std::vector<double>(n, 1.0));
  }

  [[nodiscard]] std::size_t size() const { return weights.size(); }
  [[nodiscard]] bool empty() const { return weights.empty(); }
  [[nodiscard]] double total() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  void push(std::span<const double> x, double w) {
    points.insert(points.end(), x.begin(), x.end());
    weights.push_back(w);
  }
  void validate() const {
    if (dim < 1) throw std::invalid_argument("DiscreteMeasure: dimension must be positive");
    if (points.size() != weights.size() * static_cast<std::size_t>(dim))
      throw std::invalid_argument("DiscreteMeasure: points and weights disagree");
    for (const double w : weights)
      if (!(w >= 0.0)) throw std::invalid_argument("DiscreteMeasure: negative weight");
  }
};

/// Axis-aligned box, Euclidean ball, or a union of cells z + [0, h)^d of the lattice hZ^d.
class Domain {
 public:
  enum class Kind { box, ball, cubes };

  static Domain box(std::vector<double> lo, std::vector<double> hi) {
    if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("Domain: corner size mismatch");
    for (std::size_t k = 0; k < lo.size(); ++k)
      if (!(hi[k] > lo[k])) throw std::invalid_argument("Domain: empty box");
    Domain d;
    d.kind_ = Kind::box;
    d.a_ = std::move(lo);
    d.b_ = std::move(hi);
    return d;
  }
  static Domain unit_cube(int dim) {
    return box(std::vector<double>(static_cast<std::size_t>(dim), 0.0), std::vector<double>(static_cast<std::size_t>(dim), 1.0));
  }
  static Domain ball(std::vector<double> center, double radius) {
    if (!(radius > 0.0) || center.empty()) throw std::invalid_argument("Domain: bad ball");
    Domain d;
    d.kind_ = Kind::ball;
    d.a_ = std::move(center);
    d.radius_ = radius;
    return d;
  }

  /// Union of lattice cubes, each given by its integer corner index (d <= 3).
  static Domain cubes(int dim, double h, const std::vector<std::array<std::int64_t, 3>>& cells) {
    if (dim < 1 || dim > 3 || !(h > 0.0) || cells.empty()) throw std::invalid_argument("Domain: bad cube union");
    Domain d;
    d.kind_ = Kind::cubes;
    d.a_.assign(static_cast<std::size_t>(dim), 0.0);
    d.radius_ = h;
    for (const auto& c : cells) d.cells_.insert(key(c));
    return d;
  }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] int dim() const { return static_cast<int>(a_.size()); }
  [[nodiscard]] const std::vector<double>& lo() const { return a_; }
  [[nodiscard]] const std::vector<double>& hi() const { return b_; }
  [[nodiscard]] double radius() const { return radius_; }

  [[nodiscard]] bool contains(std::span<const double> x, double tol = 1e-12) const {
    if (kind_ == Kind::box) {
      for (std::size_t k = 0; k < a_.size(); ++k)
        if (x[k] < a_[k] - tol || x[k] > b_[k] + tol) return false;
      return true;
    }
    if (kind_ == Kind::cubes) {
      // Closed cubes: a point on a face belongs when any adjacent cell does.
      const auto c = cell_of(x);
      if (member(c)) return true;
      for (int k = 0; k < dim(); ++k) {
        const double f = x[static_cast<std::size_t>(k)] / radius_ - static_cast<double>(c[static_cast<std::size_t>(k)]);
        if (f < tol / radius_) {
          auto n = c;
          --n[static_cast<std::size_t>(k)];
          if (member(n)) return true;
        }
      }
      return false;
    }
    return center_distance(x) <= radius_ + tol;
  }

  /// Distance from an interior point to the boundary.
  [[nodiscard]] double boundary_distance(std::span<const double> x) const {
    if (kind_ == Kind::box) {
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < a_.size(); ++k) m = std::min({m, x[k] - a_[k], b_[k] - x[k]});
      return std::max(0.0, m);
    }
    if (kind_ == Kind::cubes) return nearest_outside(x).first;
    return std::max(0.0, radius_ - center_distance(x));
  }

  [[nodiscard]] std::vector<double> nearest_boundary_point(std::span<const double> x) const {
    std::vector<double> y(x.begin(), x.end());
    if (kind_ == Kind::box) {
      std::size_t best = 0;
      double m = std::numeric_limits<double>::infinity();
      bool upper = false;
      for (std::size_t k = 0; k < a_.size(); ++k) {
        if (x[k] - a_[k] < m) m = x[k] - a_[k], best = k, upper = false;
        if (b_[k] - x[k] < m) m = b_[k] - x[k], best = k, upper = true;
      }
      y[best] = upper ? b_[best] : a_[best];
      return y;
    }
    if (kind_ == Kind::cubes) return nearest_outside(x).second;
    const double r = center_distance(x);
    if (r == 0.0) {
      y[0] = a_[0] + radius_;
      return y;
    }
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = a_[k] + (x[k] - a_[k]) * radius_ / r;
    return y;
  }

 private:
  [[nodiscard]] double center_distance(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < a_.size(); ++k) s += (x[k] - a_[k]) * (x[k] - a_[k]);
    return std::sqrt(s);
  }

  using Cell = std::array<std::int64_t, 3>;

  static std::int64_t key(const Cell& c) {
    constexpr std::int64_t off = 1 << 20;
    return ((c[0] + off) << 42) | ((c[1] + off) << 21) | (c[2] + off);
  }
  [[nodiscard]] bool member(const Cell& c) const { return cells_.count(key(c)) > 0; }
  [[nodiscard]] Cell cell_of(std::span<const double> x) const {
    Cell c{0, 0, 0};
    for (int k = 0; k < dim(); ++k)
      c[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(std::floor(x[static_cast<std::size_t>(k)] / radius_));
    return c;
  }

  // Distance to, and nearest point of, the closure of the complement.
  [[nodiscard]] std::pair<double, std::vector<double>> nearest_outside(std::span<const double> x) const {
    const int d = dim();
    const auto home = cell_of(x);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> point(x.begin(), x.end());
    for (std::int64_t ring = 1;; ++ring) {
      // Cells at Chebyshev distance `ring` from home are at least (ring - 1) h away.
      if (static_cast<double>(ring - 1) * radius_ >= best) break;
      Cell c{0, 0, 0};
      const std::int64_t span = 2 * ring + 1;
      std::int64_t total = 1;
      for (int k = 0; k < d; ++k) total *= span;
      for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t rest = idx, cheb = 0;
        for (int k = 0; k < d; ++k) {
          const std::int64_t o = rest % span - ring;
          rest /= span;
          c[static_cast<std::size_t>(k)] = home[static_cast<std::size_t>(k)] + o;
          cheb = std::max(cheb, std::abs(o));
        }
        if (cheb != ring && !(ring == 1 && cheb == 0)) continue;
        if (member(c)) continue;
        double s = 0.0;
        std::vector<double> y(point.size());
        for (int k = 0; k < d; ++k) {
          const auto kk = static_cast<std::size_t>(k);
          const double lo = static_cast<double>(c[kk]) * radius_, hi = lo + radius_;
          y[kk] = std::clamp(x[kk], lo, hi);
          s += (y[kk] - x[kk]) * (y[kk] - x[kk]);
        }
        if (s < best * best) {
          best = std::sqrt(s);
          point = std::move(y);
        }
      }
    }
    return {best, point};
  }

  Kind kind_ = Kind::box;
  std::vector<double> a_, b_;
  double radius_ = 0.0;  // ball radius, or lattice spacing for cubes
  std::unordered_set<std::int64_t> cells_;
};

/// (source, target, mass); source or target -1 means the boundary.
struct PlanEntry {
  std::int32_t source = 0;
  std::int32_t target = 0;
  double mass = 0.0;
  std::vector<double> boundary_point;  // projection used by a boundary arc
};

struct TransportPlan {
  std::vector<PlanEntry> arcs;
  double cost = 0.0;
};

}  // namespace matchlab::ot
