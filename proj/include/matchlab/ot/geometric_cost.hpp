#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matchlab/core/kdtree.hpp"
#include "matchlab/ot/flow.hpp"

namespace matchlab::ot {

enum class Metric { euclidean, geodesic };

/// t^p with fast paths for the common exponents.
inline double power(double t, double p) {
  if (p == 1.0) return t;
  if (p == 2.0) return t * t;
  if (p == 3.0) return t * t * t;
  return std::pow(t, p);
}

/// Chord length between unit vectors -> geodesic distance on the sphere.
inline double chord_to_arc(double chord) { return 2.0 * std::asin(std::min(1.0, 0.5 * chord)); }

/// Cost |x - y|^p (or geodesic^p on the unit sphere) between two point
/// clouds, optionally augmented by a boundary node.
///
/// With a boundary, source index N (one past the last real source) is the
/// boundary supplying targets at dist(y)^p, and sink index M is the boundary
/// absorbing sources at dist(x)^p; the boundary-to-boundary arc is free.
class GeometricCostModel final : public CostModel {
 public:
  GeometricCostModel(std::span<const double> sources, std::span<const double> targets, int dim, double p,
                     Metric metric = Metric::euclidean)
      : src_(sources.begin(), sources.end()),
        dim_(dim),
        p_(p),
        metric_(metric),
        n_(src_.size() / static_cast<std::size_t>(dim)),
        m_(targets.size() / static_cast<std::size_t>(dim)),
        tree_(targets, dim) {
    if (dim <= 0 || sources.size() % static_cast<std::size_t>(dim) != 0 ||
        targets.size() % static_cast<std::size_t>(dim) != 0)
      throw std::invalid_argument("coordinate arrays do not match dimension");
  }

  /// Enables boundary transport with per-atom distances to the boundary.
  void set_boundary(std::vector<double> source_dist, std::vector<double> target_dist) {
    if (source_dist.size() != n_ || target_dist.size() != m_)
      throw std::invalid_argument("boundary distances do not match point counts");
    bd_src_ = std::move(source_dist);
    bd_tgt_ = std::move(target_dist);
    boundary_ = true;
  }

  /// Average supply per source over average demand per sink; sets candidate degree.
  void set_mass_ratio(double ratio) { mass_ratio_ = ratio; }

  [[nodiscard]] bool has_boundary() const { return boundary_; }
  [[nodiscard]] std::size_t real_sources() const { return n_; }
  [[nodiscard]] std::size_t real_sinks() const { return m_; }
  [[nodiscard]] std::size_t num_sources() const override { return n_ + (boundary_ ? 1 : 0); }
  [[nodiscard]] std::size_t num_sinks() const override { return m_ + (boundary_ ? 1 : 0); }

  [[nodiscard]] double point_cost(std::int32_t i, std::int32_t j) const {
    const auto x = source(i);
    const double d2 = tree_.dist2(x, j);
    if (metric_ == Metric::geodesic) return power(chord_to_arc(std::sqrt(d2)), p_);
    if (p_ == 2.0) return d2;
    return power(std::sqrt(d2), p_);
  }

  [[nodiscard]] double cost(std::int32_t i, std::int32_t j) const override {
    const bool bi = boundary_ && static_cast<std::size_t>(i) == n_;
    const bool bj = boundary_ && static_cast<std::size_t>(j) == m_;
    if (bi && bj) return 0.0;
    if (bi) return power(bd_tgt_[static_cast<std::size_t>(j)], p_);
    if (bj) return power(bd_src_[static_cast<std::size_t>(i)], p_);
    return point_cost(i, j);
  }

  [[nodiscard]] std::vector<std::vector<std::int32_t>> initial_arcs(int density) const override {
    const int mult = density > 0 ? density : (dim_ <= 2 ? 3 : 2);
    const int k_src = std::min<int>(static_cast<int>(m_), mult * (static_cast<int>(std::ceil(3.0 * mass_ratio_)) + 8));
    const int k_tgt = std::min<int>(static_cast<int>(n_), mult * 4);
    std::vector<std::vector<std::int32_t>> adj(num_sources());
    for (std::size_t i = 0; i < n_; ++i) adj[i] = tree_.knn(source(static_cast<std::int32_t>(i)), k_src);
    if (k_tgt > 0 && n_ > 0) {
      KdTree src_tree(src_, dim_);
      for (std::size_t j = 0; j < m_; ++j)
        for (const auto i : src_tree.knn(tree_.point(static_cast<std::int32_t>(j)), k_tgt))
          adj[static_cast<std::size_t>(i)].push_back(static_cast<std::int32_t>(j));
    }
    if (boundary_) {
      for (std::size_t i = 0; i < n_; ++i) adj[i].push_back(static_cast<std::int32_t>(m_));
      auto& b = adj[n_];
      b.resize(m_ + 1);
      std::iota(b.begin(), b.end(), 0);
    }
    return adj;
  }

  [[nodiscard]] std::vector<std::int32_t> nearest_sinks(std::int32_t i, std::size_t k) const override {
    if (boundary_ && static_cast<std::size_t>(i) == n_) {
      std::vector<std::int32_t> all(m_ + 1);
      std::iota(all.begin(), all.end(), 0);
      return all;
    }
    auto out = tree_.knn(source(i), static_cast<int>(std::min(k, m_)));
    if (boundary_) out.push_back(static_cast<std::int32_t>(m_));
    return out;
  }

  [[nodiscard]] std::vector<std::pair<std::int32_t, std::int32_t>> violations(
      std::span<const double> ps, std::span<const double> pt, double tol) const override {
    std::vector<std::pair<std::int32_t, std::int32_t>> out;
    if (m_ == 0) return out;
    const auto& nodes = tree_.nodes();
    const auto& order = tree_.order();
    std::vector<double> node_max(nodes.size());
    for (std::size_t k = nodes.size(); k-- > 0;) {
      const auto& nd = nodes[k];
      if (nd.left < 0) {
        double mx = -std::numeric_limits<double>::infinity();
        for (auto t = nd.begin; t < nd.end; ++t) mx = std::max(mx, pt[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])]);
        node_max[k] = mx;
      } else {
        node_max[k] = std::max(node_max[static_cast<std::size_t>(nd.left)], node_max[static_cast<std::size_t>(nd.right)]);
      }
    }
    std::vector<std::int32_t> stack;
    for (std::size_t i = 0; i < n_; ++i) {
      const auto x = source(static_cast<std::int32_t>(i));
      stack.assign(1, 0);
      while (!stack.empty()) {
        const auto id = static_cast<std::size_t>(stack.back());
        stack.pop_back();
        const double lb = lower_bound(std::sqrt(tree_.box_dist2(id, x)));
        if (lb + ps[i] - node_max[id] >= -tol) continue;
        const auto& nd = nodes[id];
        if (nd.left >= 0) {
          stack.push_back(nd.left);
          stack.push_back(nd.right);
          continue;
        }
        for (auto t = nd.begin; t < nd.end; ++t) {
          const auto j = order[static_cast<std::size_t>(t)];
          if (point_cost(static_cast<std::int32_t>(i), j) + ps[i] - pt[static_cast<std::size_t>(j)] < -tol)
            out.emplace_back(static_cast<std::int32_t>(i), j);
        }
      }
    }
    return out;
  }

 private:
  [[nodiscard]] std::span<const double> source(std::int32_t i) const {
    return {src_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] double lower_bound(double euclid) const {
    return metric_ == Metric::geodesic ? power(chord_to_arc(euclid), p_) : power(euclid, p_);
  }

  std::vector<double> src_;
  int dim_;
  double p_;
  Metric metric_;
  std::size_t n_, m_;
  KdTree tree_;
  bool boundary_ = false;
  std::vector<double> bd_src_, bd_tgt_;
  double mass_ratio_ = 1.0;
};

}  // namespace matchlab::ot
