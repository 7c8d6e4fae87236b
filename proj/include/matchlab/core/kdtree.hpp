#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <utility>
#include <vector>

namespace matchlab {

/// Static kd-tree over a flat, row-major point array (n x dim).
///
/// Used for candidate-arc generation and for the branch-and-bound pricing
/// pass of the transport solver, so every node also carries a scalar slot
/// (`node_max`) that callers may fill with a per-subtree maximum.
class KdTree {
 public:
  struct Node {
    std::int32_t begin = 0;  // range into order_
    std::int32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  KdTree() = default;

  KdTree(std::span<const double> coords, int dim, int leaf_size = 16)
      : coords_(coords.begin(), coords.end()), dim_(dim), leaf_size_(leaf_size) {
    const auto n = static_cast<std::int32_t>(coords_.size() / static_cast<std::size_t>(dim_));
    order_.resize(static_cast<std::size_t>(n));
    std::iota(order_.begin(), order_.end(), 0);
    if (n > 0) {
      nodes_.reserve(static_cast<std::size_t>(2 * n / leaf_size_ + 2));
      build(0, n);
    }
  }

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] std::size_t size() const { return order_.size(); }
  [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<std::int32_t>& order() const { return order_; }

  [[nodiscard]] std::span<const double> point(std::int32_t i) const {
    return {coords_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
  }

  [[nodiscard]] std::span<const double> box_lo(std::size_t node) const {
    return {boxes_.data() + node * 2 * dim_, static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] std::span<const double> box_hi(std::size_t node) const {
    return {boxes_.data() + node * 2 * dim_ + dim_, static_cast<std::size_t>(dim_)};
  }

  /// Squared Euclidean distance from q to the bounding box of a node.
  [[nodiscard]] double box_dist2(std::size_t node, std::span<const double> q) const {
    const double* lo = boxes_.data() + node * 2 * dim_;
    const double* hi = lo + dim_;
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) {
      double t = 0.0;
      if (q[k] < lo[k]) t = lo[k] - q[k];
      else if (q[k] > hi[k]) t = q[k] - hi[k];
      s += t * t;
    }
    return s;
  }

  [[nodiscard]] double dist2(std::span<const double> q, std::int32_t i) const {
    const double* p = coords_.data() + static_cast<std::size_t>(i) * dim_;
    double s = 0.0;
    for (int k = 0; k < dim_; ++k) {
      const double t = q[k] - p[k];
      s += t * t;
    }
    return s;
  }

  /// Indices of the k nearest points to q, closest first.
  [[nodiscard]] std::vector<std::int32_t> knn(std::span<const double> q, int k) const {
    std::vector<std::int32_t> out;
    if (nodes_.empty() || k <= 0) return out;
    using Entry = std::pair<double, std::int32_t>;
    std::priority_queue<Entry> best;  // max-heap on distance
    const auto kk = static_cast<std::size_t>(k);
    auto bound = [&] { return best.size() < kk ? std::numeric_limits<double>::infinity() : best.top().first; };
    // Explicit stack, nearer child first.
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
      const auto id = stack.back();
      stack.pop_back();
      if (box_dist2(static_cast<std::size_t>(id), q) >= bound()) continue;
      const Node& nd = nodes_[static_cast<std::size_t>(id)];
      if (nd.left < 0) {
        for (auto t = nd.begin; t < nd.end; ++t) {
          const auto i = order_[static_cast<std::size_t>(t)];
          const double d2 = dist2(q, i);
          if (best.size() < kk) best.emplace(d2, i);
          else if (d2 < best.top().first) {
            best.pop();
            best.emplace(d2, i);
          }
        }
        continue;
      }
      const double dl = box_dist2(static_cast<std::size_t>(nd.left), q);
      const double dr = box_dist2(static_cast<std::size_t>(nd.right), q);
      if (dl < dr) {
        stack.push_back(nd.right);
        stack.push_back(nd.left);
      } else {
        stack.push_back(nd.left);
        stack.push_back(nd.right);
      }
    }
    out.resize(best.size());
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      *it = best.top().second;
      best.pop();
    }
    return out;
  }

 private:
  std::int32_t build(std::int32_t begin, std::int32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end, -1, -1});
    boxes_.resize(nodes_.size() * 2 * dim_);
    double* lo = boxes_.data() + static_cast<std::size_t>(id) * 2 * dim_;
    double* hi = lo + dim_;
    std::fill(lo, lo + dim_, std::numeric_limits<double>::infinity());
    std::fill(hi, hi + dim_, -std::numeric_limits<double>::infinity());
    for (auto t = begin; t < end; ++t) {
      const auto p = point(order_[static_cast<std::size_t>(t)]);
      for (int k = 0; k < dim_; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    if (end - begin <= leaf_size_) return id;
    int axis = 0;
    double widest = -1.0;
    for (int k = 0; k < dim_; ++k) {
      if (hi[k] - lo[k] > widest) {
        widest = hi[k] - lo[k];
        axis = k;
      }
    }
    if (widest <= 0.0) return id;  // all points coincide
    const auto mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::int32_t a, std::int32_t b) { return point(a)[axis] < point(b)[axis]; });
    const auto l = build(begin, mid);
    const auto r = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  std::vector<double> coords_;
  int dim_ = 0;
  int leaf_size_ = 16;
  std::vector<std::int32_t> order_;
  std::vector<Node> nodes_;
  std::vector<double> boxes_;
};

}  // namespace matchlab
