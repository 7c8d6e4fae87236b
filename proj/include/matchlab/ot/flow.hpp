#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchlab::ot {

/// Raised when the flow solver cannot complete (disconnected candidate
/// graph after every fallback, or iteration budget exhausted).
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One (source, target, mass) entry of a transport plan.
struct PlanArc {
  std::int32_t source = 0;
  std::int32_t target = 0;
  double mass = 0.0;
};

/// Candidate arcs in CSR layout, grouped by source.
struct ArcSet {
  std::vector<std::int32_t> offsets;  // size num_sources + 1
  std::vector<std::int32_t> sink;
  std::vector<double> cost;

  [[nodiscard]] std::size_t num_sources() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  [[nodiscard]] std::size_t size() const { return sink.size(); }
};

/// Builds an ArcSet from per-source (sink, cost) lists; duplicate sinks are dropped.
inline ArcSet make_arc_set(std::vector<std::vector<std::pair<std::int32_t, double>>> adjacency) {
  ArcSet arcs;
  arcs.offsets.reserve(adjacency.size() + 1);
  arcs.offsets.push_back(0);
  for (auto& row : adjacency) {
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::int32_t last = -1;
    for (const auto& [j, c] : row) {
      if (j == last) continue;
      arcs.sink.push_back(j);
      arcs.cost.push_back(c);
      last = j;
    }
    arcs.offsets.push_back(static_cast<std::int32_t>(arcs.sink.size()));
  }
  return arcs;
}

struct FlowResult {
  std::vector<PlanArc> plan;
  double cost = 0.0;
  std::vector<double> source_potential;
  std::vector<double> sink_potential;
  std::size_t augmentations = 0;
  bool feasible = true;
};

/// Primal-dual starting point for the flow solver: per-arc flows and sink
/// potentials that are nearly optimal on the arc set.
struct WarmStart {
  std::vector<double> flow;
  std::vector<double> sink_potential;
};

struct AuctionOutcome {
  bool applicable = false;         // masses fit the unit pattern
  bool complete = false;           // every person holds a sink
  std::optional<WarmStart> start;  // partial when bidding stalled
};

/// Forward auction with epsilon scaling for the unit case: every sink holds
/// one unit u and every source an integer number of units (at most 64).
/// Bidding that stalls (price wars near bottlenecks of the arc set) returns
/// the partial assignment with its prices.
inline AuctionOutcome auction_start(const ArcSet& arcs, std::span<const double> supply, std::span<const double> demand,
                                    const std::vector<double>* sink_potential = nullptr, double eps_start = 0.0) {
  AuctionOutcome out;
  const auto m = demand.size();
  if (m == 0 || arcs.num_sources() != supply.size()) return out;
  const double u = demand[0];
  if (!(u > 0.0)) return out;
  for (const double w : demand)
    if (std::abs(w - u) > 1e-12 * u) return out;
  std::vector<std::int32_t> person_src;
  person_src.reserve(m);
  for (std::size_t i = 0; i < supply.size(); ++i) {
    const double units = supply[i] / u;
    const double r = std::round(units);
    if (std::abs(units - r) > 1e-9 * std::max(1.0, units) || r > 64.0) return out;
    for (int k = 0; k < static_cast<int>(r); ++k) person_src.push_back(static_cast<std::int32_t>(i));
    if (person_src.size() > m) return out;
  }
  if (person_src.size() != m) return out;
  out.applicable = true;

  double scale = 0.0;
  for (std::size_t i = 0; i < supply.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (auto e = arcs.offsets[i]; e < arcs.offsets[i + 1]; ++e) best = std::min(best, arcs.cost[e]);
    if (std::isfinite(best)) scale += best;
  }
  scale = std::max(scale / static_cast<double>(supply.size()), 1e-300);
  double spread = 0.0;
  for (const double c : arcs.cost) spread = std::max(spread, c);

  std::vector<double> price(m, 0.0);
  if (sink_potential)
    for (std::size_t j = 0; j < m; ++j) price[j] = -(*sink_potential)[j];
  std::vector<std::int32_t> owner(m, -1);
  std::vector<std::int32_t> queue;
  const double eps_final = 1e-4 * scale;
  const std::size_t bid_cap = 100 * m + 100000;
  double eps = eps_start > 0.0 ? std::max(eps_start, eps_final) : std::max(spread, scale);
  for (;; eps = std::max(eps_final, eps / 5.0)) {
    std::fill(owner.begin(), owner.end(), -1);
    queue.resize(m);
    // Reverse order so persons are served in index order.
    for (std::size_t k = 0; k < m; ++k) queue[k] = static_cast<std::int32_t>(m - 1 - k);
    std::size_t bids = 0;
    while (!queue.empty()) {
      const auto person = queue.back();
      queue.pop_back();
      const auto i = static_cast<std::size_t>(person_src[static_cast<std::size_t>(person)]);
      double v1 = std::numeric_limits<double>::infinity();
      double v2 = v1;
      std::int32_t j1 = -1;
      for (auto e = arcs.offsets[i]; e < arcs.offsets[i + 1]; ++e) {
        const double v = arcs.cost[e] + price[arcs.sink[e]];
        if (v < v1) {
          v2 = v1;
          v1 = v;
          j1 = arcs.sink[e];
        } else if (v < v2) {
          v2 = v;
        }
      }
      if (j1 < 0) return out;
      if (!std::isfinite(v2)) v2 = v1 + spread + eps;
      price[j1] += v2 - v1 + eps;
      const auto prev = owner[j1];
      owner[j1] = person;
      if (prev >= 0) queue.push_back(prev);
      if (++bids > bid_cap) break;
    }
    if (!queue.empty() || eps <= eps_final) break;
  }
  out.complete = queue.empty();

  WarmStart start;
  start.flow.assign(arcs.size(), 0.0);
  start.sink_potential.resize(m);
  for (std::size_t j = 0; j < m; ++j) start.sink_potential[j] = -price[j];
  for (std::size_t j = 0; j < m; ++j) {
    if (owner[j] < 0) continue;
    const auto i = static_cast<std::size_t>(person_src[static_cast<std::size_t>(owner[j])]);
    const auto first = arcs.sink.begin() + arcs.offsets[i];
    const auto last = arcs.sink.begin() + arcs.offsets[i + 1];
    const auto it = std::lower_bound(first, last, static_cast<std::int32_t>(j));
    start.flow[static_cast<std::size_t>(it - arcs.sink.begin())] += u;
  }
  out.start = std::move(start);
  return out;
}

/// Maps a previous plan onto a (larger) arc set.
inline WarmStart warm_from_plan(const ArcSet& arcs, const FlowResult& prev) {
  WarmStart w;
  w.flow.assign(arcs.size(), 0.0);
  w.sink_potential = prev.sink_potential;
  for (const auto& a : prev.plan) {
    const auto first = arcs.sink.begin() + arcs.offsets[a.source];
    const auto last = arcs.sink.begin() + arcs.offsets[a.source + 1];
    const auto it = std::lower_bound(first, last, a.target);
    if (it != last && *it == a.target) w.flow[static_cast<std::size_t>(it - arcs.sink.begin())] += a.mass;
  }
  return w;
}

/// Min-cost transportation on a fixed sparse arc set by successive shortest
/// paths with node potentials (Dijkstra on reduced costs, stopped at the
/// first sink with remaining demand).
///
/// Reduced cost of a forward arc i->j is c_ij + ps_i - pt_j and is kept
/// nonnegative; arcs carrying flow are tight. The returned potentials certify
/// optimality over any superset of arcs whose reduced costs are nonnegative.
/// A warm start keeps the flow on arcs that are tight after row reduction.
class SparseFlowSolver {
 public:
  SparseFlowSolver(std::span<const double> supply, std::span<const double> demand, ArcSet arcs,
                   const WarmStart* warm = nullptr)
      : arcs_(std::move(arcs)),
        n_src_(static_cast<std::int32_t>(supply.size())),
        n_snk_(static_cast<std::int32_t>(demand.size())),
        excess_(supply.begin(), supply.end()),
        deficit_(demand.begin(), demand.end()) {
    if (arcs_.num_sources() != supply.size()) throw std::invalid_argument("arc set does not match sources");
    const double total = std::accumulate(excess_.begin(), excess_.end(), 0.0);
    total_ = std::max(1.0, total);
    tol_ = 1e-12 * total_;
    flow_.assign(arcs_.size(), 0.0);
    index_arcs();
    ps_.assign(static_cast<std::size_t>(n_src_), 0.0);
    pt_.assign(static_cast<std::size_t>(n_snk_), 0.0);
    const auto nodes = static_cast<std::size_t>(n_src_ + n_snk_);
    dist_.assign(nodes, 0.0);
    seen_.assign(nodes, 0);
    done_.assign(nodes, 0);
    pred_.assign(nodes, -1);
    if (warm) resume(*warm);
    else initialize();
  }

  [[nodiscard]] std::size_t num_arcs() const { return arcs_.size(); }

  /// Runs augmentations until every supply is routed; false if some source
  /// cannot reach a sink with remaining demand.
  bool run() {
    for (std::int32_t s = 0; s < n_src_; ++s) {
      while (excess_[s] > tol_) {
        if (!augment_from(s)) return false;
        ++augmentations_;
      }
    }
    return true;
  }

  /// Sources reached by the last failed augmentation.
  [[nodiscard]] const std::vector<std::int32_t>& stuck_sources() const { return stuck_; }

  [[nodiscard]] FlowResult result() const {
    FlowResult out;
    for (std::int32_t i = 0; i < n_src_; ++i) {
      for (auto e = arcs_.offsets[i]; e < arcs_.offsets[i + 1]; ++e) {
        if (flow_[e] > tol_) {
          out.plan.push_back(PlanArc{i, arcs_.sink[e], flow_[e]});
          out.cost += flow_[e] * arcs_.cost[e];
        }
      }
    }
    out.source_potential = ps_;
    out.sink_potential = pt_;
    out.augmentations = augmentations_;
    return out;
  }

 private:
  void index_arcs() {
    arc_src_.resize(arcs_.size());
    for (std::int32_t i = 0; i < n_src_; ++i)
      for (auto e = arcs_.offsets[i]; e < arcs_.offsets[i + 1]; ++e) arc_src_[e] = i;
    sink_arcs_.assign(static_cast<std::size_t>(n_snk_), {});
    for (std::size_t e = 0; e < arcs_.size(); ++e)
      if (flow_[e] > tol_) sink_arcs_[arcs_.sink[e]].push_back(static_cast<std::int32_t>(e));
  }

  void resume(const WarmStart& warm) {
    // Keep only flow on arcs that are tight after the row reduction.
    pt_ = warm.sink_potential;
    for (std::int32_t i = 0; i < n_src_; ++i) {
      double best = -std::numeric_limits<double>::infinity();
      for (auto e = arcs_.offsets[i]; e < arcs_.offsets[i + 1]; ++e)
        best = std::max(best, pt_[arcs_.sink[e]] - arcs_.cost[e]);
      ps_[i] = std::isfinite(best) ? best : 0.0;
    }
    for (std::size_t e = 0; e < arcs_.size(); ++e) {
      const double f = warm.flow[e];
      if (f <= 0.0) continue;
      if (reduced(e) > 1e-13 * (std::abs(arcs_.cost[e]) + 1.0)) continue;
      push(e, std::min({f, excess_[arc_src_[e]], deficit_[arcs_.sink[e]]}));
    }
  }

  void initialize() {
    // Column reduction then row reduction: both keep reduced costs >= 0.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::fill(pt_.begin(), pt_.end(), inf);
    for (std::size_t e = 0; e < arcs_.size(); ++e) pt_[arcs_.sink[e]] = std::min(pt_[arcs_.sink[e]], arcs_.cost[e]);
    for (auto& v : pt_)
      if (v == inf) v = 0.0;
    for (std::int32_t i = 0; i < n_src_; ++i) {
      double best = inf;
      for (auto e = arcs_.offsets[i]; e < arcs_.offsets[i + 1]; ++e)
        best = std::min(best, arcs_.cost[e] - pt_[arcs_.sink[e]]);
      ps_[i] = best == inf ? 0.0 : -best;
    }
    // Greedy fill along tight arcs.
    for (std::int32_t i = 0; i < n_src_; ++i) {
      for (auto e = arcs_.offsets[i]; e < arcs_.offsets[i + 1] && excess_[i] > tol_; ++e) {
        const auto j = arcs_.sink[e];
        if (deficit_[j] <= tol_) continue;
        if (reduced(e) > 1e-14 * (std::abs(arcs_.cost[e]) + 1.0)) continue;
        push(e, std::min(excess_[i], deficit_[j]));
      }
    }
  }

  [[nodiscard]] double reduced(std::size_t e) const {
    return arcs_.cost[e] + ps_[arc_src_[e]] - pt_[arcs_.sink[e]];
  }

  void push(std::size_t e, double amount) {
    const auto i = arc_src_[e];
    const auto j = arcs_.sink[e];
    if (flow_[e] <= tol_) sink_arcs_[j].push_back(static_cast<std::int32_t>(e));
    flow_[e] += amount;
    excess_[i] -= amount;
    deficit_[j] -= amount;
  }

  bool augment_from(std::int32_t s) {
    ++stamp_;
    heap_.clear();
    visited_.clear();
    auto touch = [&](std::int32_t v, double d, std::int32_t via) {
      if (seen_[v] != stamp_ || d < dist_[v]) {
        if (seen_[v] != stamp_) {
          seen_[v] = stamp_;
          visited_.push_back(v);
        }
        dist_[v] = d;
        pred_[v] = via;
        heap_.emplace_back(d, v);
        std::push_heap(heap_.begin(), heap_.end(), std::greater<>{});
      }
    };
    touch(s, 0.0, -1);
    std::int32_t target = -1;
    double reach = 0.0;
    // Nearest sink with any positive deficit: used when rounding has spread
    // the last demand over sinks that are each below the tolerance.
    std::int32_t fallback = -1;
    double fallback_reach = 0.0;
    while (!heap_.empty()) {
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<>{});
      const auto [d, v] = heap_.back();
      heap_.pop_back();
      if (done_[v] == stamp_ || d > dist_[v]) continue;
      done_[v] = stamp_;
      if (v < n_src_) {
        const double base = d + ps_[v];
        for (auto e = arcs_.offsets[v]; e < arcs_.offsets[v + 1]; ++e) {
          const auto j = arcs_.sink[e];
          const auto w = n_src_ + j;
          if (done_[w] == stamp_) continue;
          touch(w, std::max(d, base + arcs_.cost[e] - pt_[j]), e);
        }
      } else {
        const auto j = v - n_src_;
        if (deficit_[j] > tol_) {
          target = v;
          reach = d;
          break;
        }
        if (fallback < 0 && deficit_[j] > 0.0) {
          fallback = v;
          fallback_reach = d;
        }
        auto& in = sink_arcs_[j];
        for (std::size_t k = 0; k < in.size();) {
          const auto e = static_cast<std::size_t>(in[k]);
          if (flow_[e] <= tol_) {
            in[k] = in.back();
            in.pop_back();
            continue;
          }
          const auto u = arc_src_[e];
          if (done_[u] != stamp_) touch(u, d + std::max(0.0, -reduced(e)), static_cast<std::int32_t>(e));
          ++k;
        }
      }
    }
    if (target < 0 && fallback >= 0 && excess_[s] <= 1e-9 * total_) {
      target = fallback;
      reach = fallback_reach;
    }
    if (target < 0) {
      if (excess_[s] <= 1e-9 * total_) {
        excess_[s] = 0.0;  // rounding residue with no demand left anywhere
        return true;
      }
      stuck_.clear();
      for (const auto v : visited_)
        if (v < n_src_ && done_[v] == stamp_) stuck_.push_back(v);
      return false;
    }

    for (const auto v : visited_) {
      if (done_[v] != stamp_ || !(dist_[v] < reach)) continue;
      if (v < n_src_) ps_[v] += dist_[v] - reach;
      else pt_[v - n_src_] += dist_[v] - reach;
    }

    double amount = std::min(excess_[s], deficit_[target - n_src_]);
    for (auto v = target;;) {
      const auto e = static_cast<std::size_t>(pred_[v]);
      const auto u = arc_src_[e];
      if (u == s) break;
      const auto back = static_cast<std::size_t>(pred_[u]);
      amount = std::min(amount, flow_[back]);
      v = n_src_ + arcs_.sink[back];
    }
    for (auto v = target;;) {
      const auto e = static_cast<std::size_t>(pred_[v]);
      const auto u = arc_src_[e];
      const auto j = arcs_.sink[e];
      if (flow_[e] <= tol_) sink_arcs_[j].push_back(static_cast<std::int32_t>(e));
      flow_[e] += amount;
      if (u == s) break;
      const auto back = static_cast<std::size_t>(pred_[u]);
      flow_[back] -= amount;
      if (flow_[back] < tol_) flow_[back] = 0.0;
      v = n_src_ + arcs_.sink[back];
    }
    excess_[s] -= amount;
    if (excess_[s] < tol_) excess_[s] = 0.0;
    deficit_[target - n_src_] -= amount;
    return true;
  }

  ArcSet arcs_;
  std::int32_t n_src_;
  std::int32_t n_snk_;
  std::vector<double> excess_;
  std::vector<double> deficit_;
  std::vector<double> flow_;
  std::vector<std::int32_t> arc_src_;
  std::vector<std::vector<std::int32_t>> sink_arcs_;
  std::vector<double> ps_, pt_;
  std::vector<double> dist_;
  std::vector<std::uint32_t> seen_, done_;
  std::vector<std::int32_t> pred_;
  std::vector<std::int32_t> visited_;
  std::vector<std::pair<double, std::int32_t>> heap_;
  std::vector<std::int32_t> stuck_;
  std::uint32_t stamp_ = 0;
  std::size_t augmentations_ = 0;
  double tol_ = 1e-12;
  double total_ = 1.0;
};

/// Interface between the solver driver and a concrete cost structure.
///
/// `initial_arcs` proposes a sparse candidate graph; `violations` scans the
/// complete bipartite graph for arcs with negative reduced cost under the
/// given potentials. An empty violation list certifies global optimality.
class CostModel {
 public:
  virtual ~CostModel() = default;
  [[nodiscard]] virtual std::size_t num_sources() const = 0;
  [[nodiscard]] virtual std::size_t num_sinks() const = 0;
  [[nodiscard]] virtual double cost(std::int32_t i, std::int32_t j) const = 0;
  [[nodiscard]] virtual std::vector<std::vector<std::int32_t>> initial_arcs(int density) const = 0;
  /// The k cheapest sinks for one source (used to widen a stuck region).
  [[nodiscard]] virtual std::vector<std::int32_t> nearest_sinks(std::int32_t source, std::size_t k) const = 0;
  [[nodiscard]] virtual std::vector<std::pair<std::int32_t, std::int32_t>> violations(
      std::span<const double> source_potential, std::span<const double> sink_potential, double tol) const = 0;
};

/// Every pair is a candidate; violations never occur.
class DenseCostModel final : public CostModel {
 public:
  DenseCostModel(std::size_t rows, std::size_t cols, std::vector<double> costs)
      : rows_(rows), cols_(cols), costs_(std::move(costs)) {
    if (costs_.size() != rows_ * cols_) throw std::invalid_argument("cost matrix has wrong size");
  }
  [[nodiscard]] std::size_t num_sources() const override { return rows_; }
  [[nodiscard]] std::size_t num_sinks() const override { return cols_; }
  [[nodiscard]] double cost(std::int32_t i, std::int32_t j) const override {
    return costs_[static_cast<std::size_t>(i) * cols_ + static_cast<std::size_t>(j)];
  }
  [[nodiscard]] std::vector<std::vector<std::int32_t>> initial_arcs(int) const override {
    std::vector<std::vector<std::int32_t>> out(rows_);
    for (auto& row : out) {
      row.resize(cols_);
      std::iota(row.begin(), row.end(), 0);
    }
    return out;
  }
  [[nodiscard]] std::vector<std::int32_t> nearest_sinks(std::int32_t, std::size_t) const override {
    std::vector<std::int32_t> row(cols_);
    std::iota(row.begin(), row.end(), 0);
    return row;
  }
  [[nodiscard]] std::vector<std::pair<std::int32_t, std::int32_t>> violations(std::span<const double>,
                                                                              std::span<const double>,
                                                                              double) const override {
    return {};
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> costs_;
};

struct SolveStats {
  std::size_t arcs = 0;
  std::size_t rounds = 0;
  std::size_t augmentations = 0;
};

/// Exact transportation: sparse solve, global pricing, enlarge, repeat.
inline FlowResult solve_transport(std::span<const double> supply, std::span<const double> demand,
                                  const CostModel& model, SolveStats* stats = nullptr, int density = 0) {
  if (supply.size() != model.num_sources() || demand.size() != model.num_sinks())
    throw std::invalid_argument("supply/demand size does not match cost model");
  const double sa = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double sb = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (std::abs(sa - sb) > 1e-9 * std::max({1.0, sa, sb}))
    throw std::invalid_argument("unequal total masses: " + std::to_string(sa) + " vs " + std::to_string(sb));
  for (const double w : supply)
    if (!(w >= 0.0)) throw std::invalid_argument("negative supply");
  for (const double w : demand)
    if (!(w >= 0.0)) throw std::invalid_argument("negative demand");
  std::vector<double> dem(demand.begin(), demand.end());
  if (sb > 0.0)
    for (auto& w : dem) w *= sa / sb;

  auto adjacency = model.initial_arcs(density);
  const auto build = [&] {
    std::vector<std::vector<std::pair<std::int32_t, double>>> weighted(adjacency.size());
    for (std::size_t i = 0; i < adjacency.size(); ++i) {
      weighted[i].reserve(adjacency[i].size());
      for (const auto j : adjacency[i]) weighted[i].emplace_back(j, model.cost(static_cast<std::int32_t>(i), j));
    }
    return make_arc_set(std::move(weighted));
  };
  const auto widen = [&](const std::vector<std::int32_t>& sources) {
    if (sources.empty()) throw SolverFailure("transport candidate graph is infeasible");
    bool grew = false;
    for (const auto i : sources) {
      auto& row = adjacency[static_cast<std::size_t>(i)];
      const auto before = row.size();
      const auto more = model.nearest_sinks(i, std::max<std::size_t>(8, 2 * row.size()));
      row.insert(row.end(), more.begin(), more.end());
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      grew = grew || row.size() > before;
    }
    if (!grew) throw SolverFailure("transport candidate graph stays infeasible");
  };

  constexpr double price_tol = 1e-12;
  std::optional<FlowResult> prev;
  double eps_start = 0.0;
  bool use_auction = true;
  bool rebid = true;  // few violations are cheaper to repair from the previous plan
  std::size_t augmentations = 0;
  for (std::size_t round = 0; round < 256; ++round) {
    const auto arcs = build();
    std::optional<WarmStart> warm;
    if (use_auction && rebid) {
      auto bid = auction_start(arcs, supply, dem, prev ? &prev->sink_potential : nullptr, eps_start);
      use_auction = bid.applicable;
      warm = std::move(bid.start);
    }
    if (!warm && prev) warm = warm_from_plan(arcs, *prev);
    SparseFlowSolver solver(supply, dem, arcs, warm ? &*warm : nullptr);
    if (!solver.run()) {
      widen(solver.stuck_sources());
      continue;
    }
    FlowResult result = solver.result();
    augmentations += result.augmentations;
    if (stats) {
      stats->arcs = arcs.size();
      stats->rounds = round + 1;
      stats->augmentations = augmentations;
    }
    double scale = 0.0;
    for (const auto& a : result.plan) scale = std::max(scale, std::abs(model.cost(a.source, a.target)));
    const auto viol = model.violations(result.source_potential, result.sink_potential,
                                       price_tol * std::max(1.0, scale));
    if (viol.empty()) return result;
    eps_start = 0.0;
    rebid = viol.size() * 200 > dem.size();
    for (const auto& [i, j] : viol) {
      eps_start = std::max(eps_start, result.sink_potential[static_cast<std::size_t>(j)] -
                                          result.source_potential[static_cast<std::size_t>(i)] - model.cost(i, j));
      adjacency[static_cast<std::size_t>(i)].push_back(j);
    }
    for (auto& row : adjacency) {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    prev = std::move(result);
  }
  throw SolverFailure("transport pricing did not converge");
}

}  // namespace matchlab::ot
