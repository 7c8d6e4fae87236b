#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "matchlab/core/random.hpp"
#include "matchlab/core/stats.hpp"
#include "matchlab/density/truncate.hpp"
#include "matchlab/estimator/cost.hpp"
#include "matchlab/estimator/records.hpp"
#include "matchlab/geometry/partition.hpp"
#include "matchlab/ot/quantization.hpp"
#include "matchlab/ot/radial.hpp"
#include "matchlab/ot/solvers.hpp"

namespace matchlab::estimator {

// ---------------------------------------------------------------- local / global

/// Smallest c with (a + b)^p <= (1 + eps) a^p + c b^p for all a, b >= 0.
inline double young_constant(double p, double eps) {
  if (p == 1.0) return 1.0;
  const double lam = 1.0 - std::pow(1.0 + eps, -1.0 / (p - 1.0));
  return std::pow(lam, 1.0 - p);
}

struct SplitResult {
  double local = 0.0;   // sum over cells of W(mu_n|cell, kappa rho_n|cell)
  double global = 0.0;  // W(sum kappa 1_cell rho_n, n rho_n)
  double direct = 0.0;  // W(mu_n, n rho_n)
  double eps = 0.0;
  double young = 0.0;   // c_p(eps)
  double fitted_c = 0.0;  // least C with direct <= (1+eps) local + C eps^{1-p} global
  bool holds = false;     // with C = c_p(eps) eps^{p-1}
  std::size_t cells = 0;
  std::size_t atoms = 0;
};

/// Cell-aligned quantization of law on a partition: atoms of cell c are
/// [offset[c], offset[c+1]).
struct CellAtoms {
  ot::DiscreteMeasure atoms;
  std::vector<std::size_t> offset;
  std::vector<double> mass;
};

inline ot::AngularBox cell_box(const ExactPartition& part, const ExactPartition::Cell& cell) {
  ot::AngularBox b;
  if (cell.j == 1) return b;
  const auto& sp = part.sphere();
  const auto lon = sp.longitude(cell.angular);
  b.phi_lo = lon[0];
  b.phi_hi = lon[1];
  if (part.dim() == 3) {
    const auto& band = sp.band_of(cell.angular);
    b.z_lo = band.z_lo;
    b.z_hi = band.z_hi;
  }
  return b;
}

inline CellAtoms quantize_cells(const ExactPartition& part, const RadialLaw& law, std::size_t M) {
  CellAtoms out;
  out.atoms.dim = part.dim();
  for (std::size_t c = 0; c < part.size(); ++c) {
    const auto& cell = part.cells()[c];
    out.offset.push_back(out.atoms.size());
    const double m = part.mass(c, law);
    const auto k = static_cast<std::size_t>(std::max(1.0, std::round(m * static_cast<double>(M))));
    ot::quantize_sector(law, cell.r_lo, cell.r_hi, cell_box(part, cell), k, 1.0, out.atoms);
    double s = 0.0;
    for (std::size_t a = out.offset.back(); a < out.atoms.size(); ++a) s += out.atoms.weights[a];
    out.mass.push_back(s);
  }
  out.offset.push_back(out.atoms.size());
  return out;
}

/// Local/global decomposition of a sample of the truncated law on a given partition.
inline SplitResult local_global_split(const ExactPartition& part, const RadialLaw& law, const ot::DiscreteMeasure& mu,
                                      double p, double eps, std::size_t M) {
  const double n = mu.total();
  const auto ca = quantize_cells(part, law, M);
  const std::size_t C = part.size();
  std::vector<ot::DiscreteMeasure> per(C, ot::DiscreteMeasure{});
  for (auto& m : per) m.dim = mu.dim;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto c = part.cell_of(mu.point(i));
    if (c == ExactPartition::npos) throw std::domain_error("local_global_split: sample point outside the partition");
    per[c].push(mu.point(i), mu.weights[i]);
  }
  SplitResult out;
  out.eps = eps;
  out.cells = C;
  out.atoms = ca.atoms.size();
  ot::DiscreteMeasure rebalanced = ca.atoms, target = ca.atoms;
  for (std::size_t c = 0; c < C; ++c) {
    const double count = per[c].total();
    const double kappa = ca.mass[c] > 0.0 ? count / ca.mass[c] : 0.0;
    ot::DiscreteMeasure cell_target;
    cell_target.dim = mu.dim;
    for (std::size_t a = ca.offset[c]; a < ca.offset[c + 1]; ++a) {
      rebalanced.weights[a] = kappa * ca.atoms.weights[a];
      target.weights[a] = n * ca.atoms.weights[a];
      cell_target.push(ca.atoms.point(a), kappa * ca.atoms.weights[a]);
    }
    if (count > 0.0) out.local += ot::wp(per[c], cell_target, p).cost;
  }
  out.global = ot::wp(rebalanced, target, p).cost;
  out.direct = ot::wp(mu, target, p).cost;
  out.young = young_constant(p, eps);
  const double slack = out.direct - (1.0 + eps) * out.local;
  const double unit = std::pow(eps, 1.0 - p) * out.global;
  out.fitted_c = slack <= 0.0 ? 0.0 : (unit > 0.0 ? slack / unit : std::numeric_limits<double>::infinity());
  const double c_young = out.young * std::pow(eps, p - 1.0);
  out.holds = out.direct <= ((1.0 + eps) * out.local + c_young * unit) * (1.0 + 1e-9) + 1e-12;
  return out;
}

/// Sample of rho_n (n points) on the truncation schedule, split over K angular cells per shell.
inline SplitResult local_global_split(const LawSpec& spec, std::size_t n, double p, double eps, std::size_t arcs,
                                      std::uint64_t seed, std::size_t atoms = 0, const Caps& caps = {}) {
  if (spec.d != 2 && spec.d != 3) throw std::invalid_argument("local_global_split: d must be 2 or 3");
  require_cap(n, caps.lp_n, "sample size");
  const auto tr = truncate(spec.law(), eps, p, static_cast<double>(n));
  const ExactPartition part(tr.schedule, spec.d, arcs);
  auto rng = replicate_rng(seed, n, 0);
  const auto mu = ot::DiscreteMeasure::unit(spec.d, tr.law->sample(n, rng));
  return local_global_split(part, *tr.law, mu, p, eps, atoms ? atoms : 4 * n);
}

// ---------------------------------------------------------------- radial estimates

struct TypeGamma {
  double gamma = 0.0;
  double r_bar = 0.0;
  double c_minus = 0.0;  // sup_{r < r_bar} int_0^r lambda / (r lambda(r))
  double c_plus = 0.0;   // sup_{r_bar < r < R} int_r^R lambda / (r^gamma lambda(r))
};

/// Grid evaluation (log-spaced in the head, uniform in the tail) of the type-gamma ratios.
inline TypeGamma type_gamma_constants(const ot::Density1D& lambda, double r_bar, double gamma,
                                      std::size_t grid = 4000) {
  TypeGamma t;
  t.gamma = gamma;
  t.r_bar = r_bar;
  const double R = lambda.hi();
  for (std::size_t k = 1; k < grid; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(grid);
    const double r = r_bar * std::pow(1e-6, 1.0 - u);
    const double l = lambda.pdf(r);
    if (l > 0.0) t.c_minus = std::max(t.c_minus, lambda.cdf(r) / (r * l));
  }
  for (std::size_t k = 0; k < grid; ++k) {
    const double r = r_bar + (R - r_bar) * static_cast<double>(k) / static_cast<double>(grid);
    const double l = lambda.pdf(r);
    if (l > 0.0) t.c_plus = std::max(t.c_plus, (1.0 - lambda.cdf(r)) / (std::pow(r, gamma) * l));
  }
  return t;
}

struct RadialSplit {
  std::vector<double> edges;
  std::vector<double> counts;
  double cost = 0.0;   // W_p^p(sum kappa_i lambda 1_{I_i}, n lambda)
  double bound = 0.0;  // int |phi'|^p / (n lambda)^{p-1}
  double ratio = 0.0;  // cost / bound (0 when both vanish)
  double rhs = 0.0;    // n^{1-p/2} (r1^p lambda(I_0)^{1-p/2} + int_{r1}^R r^{gamma p/2} lambda^{1-p/2})
  TypeGamma type;
};

/// Radial marginal of rho_n with shell counts of a sample of size n.
inline RadialSplit radial_split_check(const LawSpec& spec, std::size_t n, double p, double eps, std::uint64_t seed,
                                      std::size_t replicate = 0) {
  const auto tr = truncate(spec.law(), eps, p, static_cast<double>(n));
  auto lambda = std::make_shared<const ot::RadialMarginal>(tr.law);
  RadialSplit out;
  out.edges.push_back(0.0);
  for (const double r : tr.schedule.r) out.edges.push_back(r);
  out.counts.assign(out.edges.size() - 1, 0.0);
  auto rng = replicate_rng(seed, n, replicate);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = tr.law->quantile(uniform_open(rng));
    const auto j = tr.schedule.shell_of(r);
    out.counts[j == 0 ? out.counts.size() - 1 : j - 1] += 1.0;
  }
  const auto nf = ot::neumann_flux_bound(lambda, out.edges, out.counts, static_cast<double>(n), p);
  out.bound = nf.bound;
  out.cost = ot::rebalanced_cost(*lambda, out.edges, out.counts, static_cast<double>(n), p);
  out.ratio = out.bound > 0.0 ? out.cost / out.bound : 0.0;
  const double gamma = 1.0 - spec.exponent();
  const double r1 = tr.schedule.r1();
  const double head = std::pow(r1, p) * std::pow(lambda->cdf(r1), 1.0 - 0.5 * p);
  double tail = 0.0;
  std::vector<double> cuts{r1};
  for (const double b : lambda->breakpoints()) cuts.push_back(b);
  cuts.push_back(tr.schedule.r_outer());
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c)
    tail += integrate([&](double r) { return std::pow(r, 0.5 * gamma * p) * std::pow(lambda->pdf(r), 1.0 - 0.5 * p); },
                      cuts[c], cuts[c + 1], 1e-9, "radial rhs");
  out.rhs = std::pow(static_cast<double>(n), 1.0 - 0.5 * p) * (head + tail);
  out.type = type_gamma_constants(*lambda, r1, gamma);
  return out;
}

// ---------------------------------------------------------------- angular estimate

/// n equal-measure cells of S^{d-1}, each represented by its projected centroid.
inline ot::DiscreteMeasure sphere_atoms(int d, std::size_t n) {
  const SpherePartition sp(d, n);
  ot::DiscreteMeasure out;
  out.dim = d;
  for (std::size_t k = 0; k < n; ++k) {
    auto c = sp.mean_direction(k);
    double r = 0.0;
    for (int t = 0; t < d; ++t) r += c[static_cast<std::size_t>(t)] * c[static_cast<std::size_t>(t)];
    r = std::sqrt(r);
    if (r < 1e-12) {
      c = {0.0, 0.0, 0.0};
      c[static_cast<std::size_t>(d - 1)] = 1.0;
      r = 1.0;
    }
    for (int t = 0; t < d; ++t) c[static_cast<std::size_t>(t)] /= r;
    out.push(std::span<const double>(c.data(), static_cast<std::size_t>(d)), 1.0);
  }
  return out;
}

struct SphereCost {
  std::size_t n = 0;
  Summary cost;
  double moment = 0.0;  // M_p
  double eta = 0.0;     // eta_n^{p, d-1}
  double ratio = 0.0;   // mean / (M_p eta)
  std::size_t resampled = 0;
  std::vector<double> costs;
};

/// Geodesic W_p^p between the projected sample X_i / |X_i| and n sphere atoms.
inline SphereCost sphere_projection_cost(const LawSpec& spec, std::size_t n, double p, std::size_t reps,
                                         std::uint64_t seed, const Caps& caps = {}, std::size_t jobs = 1) {
  const int d = spec.d;
  if (d != 2 && d != 3) throw std::invalid_argument("sphere_projection_cost: d must be 2 or 3");
  require_cap(n, caps.lp_n, "sample size");
  const auto law = spec.law();
  const auto target = sphere_atoms(d, n);
  SphereCost out;
  out.n = n;
  out.costs.assign(reps, 0.0);
  std::vector<std::size_t> resampled(reps, 0);
  parallel_for(reps, jobs, [&](std::size_t r) {
    auto rng = replicate_rng(seed, n, r);
    std::vector<double> pts;
    std::vector<double> x(static_cast<std::size_t>(d));
    while (pts.size() < n * static_cast<std::size_t>(d)) {
      const auto one = law->sample(1, rng);
      double len = 0.0;
      for (const double v : one) len += v * v;
      len = std::sqrt(len);
      if (len == 0.0) {
        ++resampled[r];
        continue;
      }
      for (const double v : one) pts.push_back(v / len);
    }
    const auto mu = ot::DiscreteMeasure::unit(d, pts);
    out.costs[r] = ot::wp(mu, target, p, ot::Metric::geodesic).cost;
  });
  for (const auto c : resampled) out.resampled += c;
  out.cost = summarize(out.costs);
  out.moment = law->moment(p);
  out.eta = eta(static_cast<double>(n), p, d - 1);
  out.ratio = out.cost.mean / (out.moment * out.eta);
  return out;
}

// ---------------------------------------------------------------- cube lower bound

struct CubeReport {
  std::array<std::int64_t, 3> corner{};  // cube = h (corner + [0,1)^d)
  std::size_t count = 0;
  double mass = 0.0;  // n rho(Q)
  double cost = 0.0;  // Wb_Q(mu_n|Q, n rho|Q)
  double goodbounds = 0.0;      // h V'(r_Q), r_Q = farthest corner radius
  double averagepoints = 0.0;   // n h^d rho(r_Q)
};

struct LowerBound {
  std::vector<CubeReport> cubes;
  double sum = 0.0;     // sum of per-cube Wb
  double union_cost = 0.0;  // Wb over the union of cubes
  double direct = 0.0;  // W_p^p(mu_n, n rho) on the same discretization
  bool chain_holds = false;
  std::size_t outside_atoms = 0;
};

/// Cubes of side h of the lattice hZ^d contained in B_R.
inline std::vector<std::array<std::int64_t, 3>> cubes_in_ball(int d, double h, double R) {
  std::vector<std::array<std::int64_t, 3>> out;
  const auto k = static_cast<std::int64_t>(std::ceil(R / h)) + 1;
  std::array<std::int64_t, 3> c{0, 0, 0};
  const std::int64_t span = 2 * k + 1;
  std::int64_t total = 1;
  for (int t = 0; t < d; ++t) total *= span;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rest = idx;
    double far2 = 0.0;
    for (int t = 0; t < d; ++t) {
      c[static_cast<std::size_t>(t)] = rest % span - k;
      rest /= span;
      const double lo = h * static_cast<double>(c[static_cast<std::size_t>(t)]);
      const double f = std::max(std::abs(lo), std::abs(lo + h));
      far2 += f * f;
    }
    if (std::sqrt(far2) <= R) out.push_back(c);
  }
  return out;
}

/// Superadditivity chain sum_z Wb_{Q_z} <= Wb_{union} <= W for a sample of rho.
/// The target n rho is discretized by sub^d Gauss-Legendre cells per cube and
/// by equal-weight Monte Carlo atoms of rho outside the union.
inline LowerBound lower_bound_cells(const LawSpec& spec, std::size_t n, double p, double h, double R,
                                    std::uint64_t seed, std::size_t sub = 4, std::size_t outside = 0,
                                    const Caps& caps = {}) {
  const int d = spec.d;
  if (d < 1 || d > 3) throw std::invalid_argument("lower_bound_cells: d must be 1, 2 or 3");
  require_cap(n, caps.lp_n, "sample size");
  const auto v = spec.potential();
  const auto law = spec.law();
  const auto cubes = cubes_in_ball(d, h, R);
  if (cubes.empty()) throw std::invalid_argument("lower_bound_cells: no cube of side h fits in B_R");
  const auto union_domain = ot::Domain::cubes(d, h, cubes);
  auto rng = replicate_rng(seed, n, 0);
  const auto pts = law->sample(n, rng);
  const auto mu = ot::DiscreteMeasure::unit(d, pts);
  const double nn = static_cast<double>(n);
  const auto& gx = boost::math::quadrature::gauss<double, 8>::abscissa();
  const auto& gw = boost::math::quadrature::gauss<double, 8>::weights();
  // 1D node list on [0, 1] (symmetric rule expanded).
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i < gx.size(); ++i) {
    nodes.push_back(0.5 - 0.5 * gx[i]);
    weights.push_back(0.5 * gw[i]);
    if (gx[i] != 0.0) {
      nodes.push_back(0.5 + 0.5 * gx[i]);
      weights.push_back(0.5 * gw[i]);
    }
  }
  LowerBound out;
  ot::DiscreteMeasure all_target, union_sample, union_target;
  all_target.dim = union_sample.dim = union_target.dim = d;
  double inside_mass = 0.0;
  const double s = h / static_cast<double>(sub);
  std::array<double, 3> x{}, y{};
  for (const auto& c : cubes) {
    CubeReport rep;
    rep.corner = c;
    ot::DiscreteMeasure qs, qt;
    qs.dim = qt.dim = d;
    for (std::size_t i = 0; i < n; ++i) {
      const auto pt = mu.point(i);
      bool in = true;
      for (int t = 0; t < d; ++t) {
        const double f = pt[static_cast<std::size_t>(t)] / h - static_cast<double>(c[static_cast<std::size_t>(t)]);
        if (f < 0.0 || f >= 1.0) in = false;
      }
      if (in) qs.push(pt, 1.0);
    }
    rep.count = qs.size();
    std::size_t sub_total = 1;
    for (int t = 0; t < d; ++t) sub_total *= sub;
    for (std::size_t idx = 0; idx < sub_total; ++idx) {
      std::size_t rest = idx;
      std::array<double, 3> lo{};
      for (int t = 0; t < d; ++t) {
        lo[static_cast<std::size_t>(t)] = h * static_cast<double>(c[static_cast<std::size_t>(t)]) + s * static_cast<double>(rest % sub);
        rest /= sub;
      }
      // Tensor Gauss-Legendre mass and centroid of the subcell.
      double m = 0.0;
      std::array<double, 3> mom{};
      std::size_t tn = 1;
      for (int t = 0; t < d; ++t) tn *= nodes.size();
      for (std::size_t g = 0; g < tn; ++g) {
        std::size_t rr = g;
        double w = 1.0, r2 = 0.0;
        for (int t = 0; t < d; ++t) {
          const auto kk = rr % nodes.size();
          rr /= nodes.size();
          y[static_cast<std::size_t>(t)] = lo[static_cast<std::size_t>(t)] + s * nodes[kk];
          w *= s * weights[kk];
          r2 += y[static_cast<std::size_t>(t)] * y[static_cast<std::size_t>(t)];
        }
        const double f = w * law->density(std::sqrt(r2));
        m += f;
        for (int t = 0; t < d; ++t) mom[static_cast<std::size_t>(t)] += f * y[static_cast<std::size_t>(t)];
      }
      for (int t = 0; t < d; ++t) x[static_cast<std::size_t>(t)] = mom[static_cast<std::size_t>(t)] / m;
      const std::span<const double> xs(x.data(), static_cast<std::size_t>(d));
      qt.push(xs, nn * m);
      rep.mass += nn * m;
    }
    inside_mass += rep.mass;
    rep.cost = ot::wb(qs, qt, p, ot::Domain::box(
                                     [&] {
                                       std::vector<double> a;
                                       for (int t = 0; t < d; ++t) a.push_back(h * static_cast<double>(c[static_cast<std::size_t>(t)]));
                                       return a;
                                     }(),
                                     [&] {
                                       std::vector<double> b;
                                       for (int t = 0; t < d; ++t) b.push_back(h * static_cast<double>(c[static_cast<std::size_t>(t)] + 1));
                                       return b;
                                     }()))
                   .cost;
    double far2 = 0.0;
    for (int t = 0; t < d; ++t) {
      const double lo = h * static_cast<double>(c[static_cast<std::size_t>(t)]);
      const double f = std::max(std::abs(lo), std::abs(lo + h));
      far2 += f * f;
    }
    const double rq = std::sqrt(far2);
    rep.goodbounds = h * v.derivative(rq);
    rep.averagepoints = nn * std::pow(h, d) * law->density(rq);
    out.sum += rep.cost;
    for (std::size_t i = 0; i < qs.size(); ++i) union_sample.push(qs.point(i), 1.0);
    for (std::size_t a = 0; a < qt.size(); ++a) union_target.push(qt.point(a), qt.weights[a]);
    out.cubes.push_back(rep);
  }
  out.union_cost = ot::wb(union_sample, union_target, p, union_domain).cost;
  // Outside mass by rejection sampling of rho off the union.
  const double out_mass = std::max(0.0, nn - inside_mass);
  all_target = union_target;
  if (out_mass > 0.0) {
    const std::size_t k = outside ? outside : std::max<std::size_t>(1, n - std::min(n, union_sample.size()));
    auto orng = replicate_rng(seed ^ 0x9e3779b97f4a7c15ULL, n, 1);
    std::size_t got = 0;
    while (got < k) {
      const auto one = law->sample(1, orng);
      if (union_domain.contains(one, 0.0)) continue;
      all_target.push(one, out_mass / static_cast<double>(k));
      ++got;
    }
    out.outside_atoms = k;
  }
  out.direct = ot::wp(mu, all_target, p).cost;
  const double tol = 1e-8;
  out.chain_holds = out.sum <= out.union_cost * (1.0 + tol) + 1e-12 && out.union_cost <= out.direct * (1.0 + tol) + 1e-12;
  return out;
}

// ---------------------------------------------------------------- density change

struct ChangeSweep {
  std::vector<double> gaps;   // |m - m'|
  std::vector<double> costs;  // Wb(m 1, m' 1)
  LinearFit fit;              // log cost on log gap
};

/// Wb between densities 1 and 1 - gap on (0,1)^d, each discretized by k atoms per axis.
inline ChangeSweep mass_change_sweep(int d, double p, std::size_t k, const std::vector<double>& gaps) {
  if (d != 1 && d != 2) throw std::invalid_argument("mass_change_sweep: d must be 1 or 2");
  ChangeSweep out;
  const std::size_t N = d == 1 ? k : k * k;
  const auto dom = ot::Domain::unit_cube(d);
  for (const double g : gaps) {
    if (!(g > 0.0 && g < 1.0)) throw std::invalid_argument("mass_change_sweep: gaps must lie in (0,1)");
    ot::DiscreteMeasure a, b;
    a.dim = b.dim = d;
    for (std::size_t i = 0; i < N; ++i) {
      double x[2] = {(static_cast<double>(i % k) + 0.5) / static_cast<double>(k),
                     (static_cast<double>(i / k) + 0.5) / static_cast<double>(k)};
      const std::span<const double> xs(x, static_cast<std::size_t>(d));
      a.push(xs, 1.0 / static_cast<double>(N));
      b.push(xs, (1.0 - g) / static_cast<double>(N));
    }
    out.gaps.push_back(g);
    out.costs.push_back(ot::wb(a, b, p, dom).cost);
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    lx.push_back(std::log(out.gaps[i]));
    ly.push_back(std::log(out.costs[i]));
  }
  if (lx.size() >= 2) out.fit = fit_line(lx, ly);
  return out;
}

}  // namespace matchlab::estimator
