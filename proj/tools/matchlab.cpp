// matchlab command-line front end: cost, sweep, constants, split, verify.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matchlab/estimator/cost.hpp"
#include "matchlab/estimator/decomposition.hpp"
#include "matchlab/estimator/properties.hpp"
#include "matchlab/ot/flow.hpp"

using nlohmann::json;
namespace est = matchlab::estimator;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_caps = 3;
constexpr int exit_internal = 4;

const char* csv_schema =
    "CSV columns (cost, sweep --csv):\n"
    "  run_id     16 hex digits, hash of the run configuration\n"
    "  d p q n    dimension, cost exponent, potential exponent, sample size\n"
    "  rep seed   replicate index and master seed\n"
    "  cost       W_p^p(mu_n, n rho) against the quantized density\n"
    "  eta tau    rate functions at n\n"
    "  ratio_tau  cost / tau\n"
    "  err_radius rigorous bound on |true cost - cost|\n"
    "  wall_ms    solve time (the only nondeterministic column)\n"
    "Numbers are printed with 17 significant digits.";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Output sink: "-" is standard output.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") {
      out_ = &std::cout;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::invalid_argument("cannot open output file " + path);
      out_ = file_.get();
    }
  }
  void line(const std::string& s) {
    *out_ << s << '\n';
    out_->flush();
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_ = nullptr;
};

struct Common {
  std::string density = "gaussian";
  double q = 2.0;
  double scale = 1.0;
  int d = 0;
  double p = 2.0;
  double eps = 0.1;
  std::uint64_t seed = 1;
  std::size_t atoms = 0;
  std::size_t jobs = 1;
  std::size_t reps = 1;
  std::string out = "-";
  std::string jsonl;
  std::string plot_data;
};

void add_law(CLI::App* c, Common& o) {
  c->add_option("--density", o.density, "gaussian | power")
      ->check(CLI::IsMember({"gaussian", "power"}))
      ->capture_default_str();
  c->add_option("--q", o.q, "potential exponent (power density)")->capture_default_str();
  c->add_option("--scale", o.scale, "potential scale (power density)")->capture_default_str();
  c->add_option("--d", o.d, "dimension")->required()->check(CLI::Range(1, 3));
}

void add_run(CLI::App* c, Common& o) {
  c->add_option("--p", o.p, "cost exponent")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--eps", o.eps, "truncation / decomposition parameter")->capture_default_str();
  c->add_option("--seed", o.seed, "master seed (MATCHLAB_SEED overrides)")->capture_default_str();
  c->add_option("--jobs", o.jobs, "worker threads for replicates")->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--jsonl", o.jsonl, "JSON-lines record log");
}

est::LawSpec law_of(const Common& o) { return est::LawSpec{o.density, o.d, o.q, o.scale}; }

json config_json(const std::string& command, const Common& o) {
  return json{{"command", command}, {"density", o.density}, {"q", o.q},       {"scale", o.scale},
              {"d", o.d},           {"p", o.p},             {"eps", o.eps},   {"seed", o.seed},
              {"quant_atoms", o.atoms}, {"reps", o.reps}};
}

json record_json(const std::string& command, const Common& o, const est::ExperimentRecord& r) {
  json cfg = config_json(command, o);
  cfg["n"] = r.n;
  cfg["replicate"] = r.replicate;
  json j{{"config", cfg},
         {"measure", r.measure},
         {"cost", r.cost},
         {"eta", r.predicted.eta},
         {"tau", r.predicted.tau},
         {"ell", r.predicted.ell},
         {"atoms", r.atoms},
         {"error_radius", r.error_radius},
         {"flagged", r.flagged},
         {"wall_ms", r.wall_ms}};
  j["xi"] = std::isfinite(r.predicted.xi) ? json(r.predicted.xi) : json(nullptr);
  j["known_prefactor"] = r.predicted.known_prefactor ? json(*r.predicted.known_prefactor) : json(nullptr);
  return j;
}

json fit_json(const est::FitResult& f) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return json{{"n", f.n},
              {"mean", f.mean},
              {"se", f.se},
              {"ratio", f.ratio},
              {"ratio_se", f.ratio_se},
              {"exponent", num(f.exponent)},
              {"exponent_se", num(f.exponent_se)},
              {"prefactor", f.prefactor},
              {"prefactor_se", f.prefactor_se},
              {"residual_sd", num(f.residual_sd)},
              {"band", num(f.band)},
              {"monotone", f.monotone}};
}

std::string run_id(const std::string& command, const Common& o, std::size_t n) {
  json c = config_json(command, o);
  c["n"] = n;
  return hex16(fnv1a(c.dump()));
}

std::string csv_header() { return "run_id,d,p,q,n,rep,seed,cost,eta,tau,ratio_tau,err_radius,wall_ms"; }

std::string csv_row(const std::string& id, const est::ExperimentRecord& r) {
  std::ostringstream s;
  s << id << ',' << r.d << ',' << g17(r.p) << ',' << g17(r.q) << ',' << r.n << ',' << r.replicate << ',' << r.seed
    << ',' << g17(r.cost) << ',' << g17(r.predicted.eta) << ',' << g17(r.predicted.tau) << ','
    << g17(r.cost / r.predicted.tau) << ',' << g17(r.error_radius) << ',' << g17(r.wall_ms);
  return s.str();
}

void write_plot(const std::string& dir, const std::string& name, const std::vector<double>& x,
                const std::vector<double>& y) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write plot data in " + dir);
  for (std::size_t i = 0; i < x.size(); ++i) f << g17(x[i]) << ' ' << g17(y[i]) << '\n';
}

est::CostOptions cost_options(const Common& o) {
  est::CostOptions c;
  c.atoms = o.atoms;
  c.eps = o.eps;
  c.jobs = o.jobs;
  return c;
}

// Replicates in chunks of `jobs` so that finished rows reach the output early.
std::vector<est::ExperimentRecord> run_costs(const std::string& command, const Common& o, std::size_t n,
                                             Sink* csv, Sink* log) {
  std::vector<est::ExperimentRecord> all;
  const auto spec = law_of(o);
  const std::string id = run_id(command, o, n);
  for (std::size_t first = 0; first < o.reps; first += o.jobs) {
    auto opt = cost_options(o);
    opt.first_replicate = first;
    const auto recs = est::estimate_cost(spec, n, o.p, std::min(o.jobs, o.reps - first), o.seed, opt);
    for (const auto& r : recs) {
      if (csv) csv->line(csv_row(id, r));
      if (log) log->line(record_json(command, o, r).dump());
    }
    all.insert(all.end(), recs.begin(), recs.end());
  }
  return all;
}

// key=value lines become --key=value arguments unless the flag is already present.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string path;
  std::set<std::string> given;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a file");
      path = args[++i];
      continue;
    }
    if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
      continue;
    }
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    out.push_back(a);
  }
  if (path.empty()) return out;
  std::ifstream f(path);
  if (!f) throw CLI::ValidationError("--config", "cannot read " + path);
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(f, line)) {
    const auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b, line.find_last_not_of(" \t\r") - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--config", "line without '=': " + line);
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    if (given.count(key)) continue;
    if (value == "true") extra.push_back("--" + key);
    else if (value != "false") extra.push_back("--" + key + "=" + value);
  }
  // Insert after the subcommand name (first positional).
  const auto pos = out.empty() ? out.end() : out.begin() + 1;
  out.insert(pos, extra.begin(), extra.end());
  return out;
}

int verify(const Common& o, Sink& out, Sink* log) {
  std::vector<est::PropertyResult> results;
  for (auto& r : est::check_solver_exactness(200, o.seed)) results.push_back(r);
  for (auto& r : est::check_structure(60, o.seed)) results.push_back(r);
  for (const double p : {1.0, 2.0}) {
    const auto c = est::check_change(1, p, 300);
    results.push_back({"density change exponent d=1 p=" + est::props::num(p), c.passed,
                       "slope " + est::props::num(c.sweep.fit.slope)});
  }
  const auto cv = est::check_covering(3, 2.0, 1e4, 30, 4000, o.seed);
  results.push_back({"covering weight equals 1", cv.passed,
                     std::to_string(cv.within) + "/" + std::to_string(cv.points) + " within 4 se"});
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    out.line(std::string(r.passed ? "PASS " : "FAIL ") + r.name + ": " + r.detail);
    if (log) log->line(json{{"property", r.name}, {"passed", r.passed}, {"detail", r.detail}}.dump());
  }
  return ok ? 0 : exit_internal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matchlab: random matching costs for radially symmetric densities"};
  app.footer(csv_schema);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common o;
  std::size_t n = 0;
  std::vector<double> grid;
  std::string mode;
  std::string csv_path;
  std::size_t arcs = 8;
  double h = 0.5, radius = 2.0;

  auto* cost = app.add_subcommand("cost", "per-replicate semi-discrete cost as CSV");
  add_law(cost, o);
  add_run(cost, o);
  cost->add_option("--n", n, "sample size")->required()->check(CLI::PositiveNumber);
  cost->add_option("--reps", o.reps, "replicates")->capture_default_str()->check(CLI::PositiveNumber);
  cost->add_option("--quant-atoms", o.atoms, "quantization budget M (0: 4n)")->capture_default_str();
  cost->add_option("--out", o.out, "CSV output ('-' for stdout)")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "rate fit over an n grid (FitResult JSON)");
  add_law(sweep, o);
  add_run(sweep, o);
  sweep->add_option("--n-grid", grid, "comma-separated sample sizes")->required()->delimiter(',');
  sweep->add_option("--reps", o.reps, "replicates per n")->capture_default_str();
  sweep->add_option("--quant-atoms", o.atoms, "quantization budget M (0: 4n)")->capture_default_str();
  sweep->add_option("--mode", mode, "rate | concentration | sphere")
      ->check(CLI::IsMember({"rate", "concentration", "sphere"}))
      ->default_str("rate");
  sweep->add_option("--out", o.out, "JSON output")->capture_default_str();
  sweep->add_option("--csv", csv_path, "per-replicate CSV");
  sweep->add_option("--plot-data", o.plot_data, "directory for two-column plot files");

  auto* constants = app.add_subcommand("constants", "cube constants for W and Wb");
  constants->add_option("--d", o.d, "dimension (2 or 3)")->required()->check(CLI::Range(2, 3));
  add_run(constants, o);
  constants->add_option("--n-grid", grid, "comma-separated sample sizes")->required()->delimiter(',');
  constants->add_option("--reps", o.reps, "replicates per n")->capture_default_str();
  constants->add_option("--quant-atoms", o.atoms, "quantization budget M (0: 4n)")->capture_default_str();
  constants->add_option("--out", o.out, "JSON output")->capture_default_str();
  constants->add_option("--plot-data", o.plot_data, "directory for two-column plot files");

  auto* split = app.add_subcommand("split", "local/global split, radial flux bound, or cube lower bound");
  add_law(split, o);
  add_run(split, o);
  split->add_option("--n", n, "sample size")->required()->check(CLI::PositiveNumber);
  split->add_option("--reps", o.reps, "replicates")->capture_default_str();
  split->add_option("--mode", mode, "local-global | radial | lower-bound")
      ->check(CLI::IsMember({"local-global", "radial", "lower-bound"}))
      ->default_str("local-global");
  split->add_option("--arcs", arcs, "angular cells per shell")->capture_default_str();
  split->add_option("--quant-atoms", o.atoms, "quantization budget M (0: 4n)")->capture_default_str();
  split->add_option("--side", h, "cube side (lower-bound)")->capture_default_str();
  split->add_option("--radius", radius, "ball radius containing the cubes (lower-bound)")->capture_default_str();
  split->add_option("--out", o.out, "JSON-lines output")->capture_default_str();

  auto* verify_cmd = app.add_subcommand("verify", "property suite; exit 0 only if every check passes");
  verify_cmd->add_option("--seed", o.seed, "master seed (MATCHLAB_SEED overrides)")->capture_default_str();
  verify_cmd->add_option("--jsonl", o.jsonl, "JSON-lines result log");
  verify_cmd->add_option("--out", o.out, "report output")->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }
  if (const char* env = std::getenv("MATCHLAB_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') {
      std::cerr << "MATCHLAB_SEED must be an unsigned integer\n";
      return exit_usage;
    }
    o.seed = v;
  }

  try {
    Sink out(o.out);
    std::unique_ptr<Sink> log;
    if (!o.jsonl.empty()) log = std::make_unique<Sink>(o.jsonl);
    if (*cost) {
      out.line(csv_header());
      run_costs("cost", o, n, &out, log.get());
      return 0;
    }
    if (*sweep) {
      std::unique_ptr<Sink> csv;
      if (!csv_path.empty()) {
        csv = std::make_unique<Sink>(csv_path);
        csv->line(csv_header());
      }
      const auto spec = law_of(o);
      if (mode.empty() || mode == "rate") {
        if (grid.size() < 3) throw std::invalid_argument("sweep: --n-grid needs at least three values");
        std::vector<std::vector<double>> costs;
        for (const double nn : grid) costs.push_back(est::costs_of(run_costs("sweep", o, static_cast<std::size_t>(nn), csv.get(), log.get())));
        const double q = spec.exponent();
        const auto fit = est::fit_costs(grid, costs, [&](double x) { return matchlab::tau(x, o.p, o.d, q); });
        json j = config_json("sweep", o);
        out.line(json{{"config", j}, {"fit", fit_json(fit)}}.dump());
        write_plot(o.plot_data, "ratio_tau.dat", grid, fit.ratio);
        return 0;
      }
      if (mode == "concentration") {
        auto opt = cost_options(o);
        const auto res = est::concentration_check(spec, grid, o.p, o.reps, o.seed, opt);
        json rows = json::array();
        std::vector<double> sd;
        for (const auto& r : res.rows) {
          rows.push_back({{"n", r.n}, {"mean_ratio", r.mean_ratio}, {"sd_ratio", r.sd_ratio}, {"xi", r.xi},
                          {"sd_over_xi", r.sd_over_xi}});
          sd.push_back(r.sd_ratio);
        }
        if (log)
          for (const auto& r : res.records) log->line(record_json("sweep", o, r).dump());
        out.line(json{{"config", config_json("sweep", o)}, {"concentration", rows}}.dump());
        write_plot(o.plot_data, "sd_ratio.dat", grid, sd);
        return 0;
      }
      json rows = json::array();
      std::vector<double> ratio;
      for (const double nn : grid) {
        const auto s = est::sphere_projection_cost(spec, static_cast<std::size_t>(nn), o.p, o.reps, o.seed, {}, o.jobs);
        rows.push_back({{"n", s.n}, {"mean", s.cost.mean}, {"se", s.cost.se}, {"moment", s.moment}, {"eta", s.eta},
                        {"ratio", s.ratio}, {"resampled", s.resampled}});
        ratio.push_back(s.ratio);
      }
      out.line(json{{"config", config_json("sweep", o)}, {"sphere", rows}}.dump());
      write_plot(o.plot_data, "sphere_ratio.dat", grid, ratio);
      return 0;
    }
    if (*constants) {
      const auto res = est::constant_cube(o.p, o.d, grid, o.reps, o.seed, cost_options(o));
      if (log)
        for (const auto& r : res.records) log->line(record_json("constants", o, r).dump());
      out.line(json{{"config", config_json("constants", o)},
                    {"upper", fit_json(res.upper)},
                    {"lower", fit_json(res.lower)},
                    {"spread", res.spread}}
                   .dump());
      write_plot(o.plot_data, "cube_upper.dat", grid, res.upper.ratio);
      write_plot(o.plot_data, "cube_lower.dat", grid, res.lower.ratio);
      return 0;
    }
    if (*split) {
      const auto spec = law_of(o);
      for (std::size_t r = 0; r < o.reps; ++r) {
        const std::uint64_t seed = matchlab::stream_seed(o.seed, r);
        json j{{"config", config_json("split", o)}, {"replicate", r}, {"n", n}, {"mode", mode.empty() ? "local-global" : mode}};
        if (mode.empty() || mode == "local-global") {
          const auto s = est::local_global_split(spec, n, o.p, o.eps, arcs, seed, o.atoms);
          j.update({{"local", s.local}, {"global", s.global}, {"direct", s.direct}, {"young", s.young},
                    {"fitted_c", s.fitted_c}, {"holds", s.holds}, {"cells", s.cells}, {"atoms", s.atoms}});
        } else if (mode == "radial") {
          const auto s = est::radial_split_check(spec, n, o.p, o.eps, o.seed, r);
          j.update({{"cost", s.cost}, {"bound", s.bound}, {"ratio", s.ratio}, {"rhs", s.rhs},
                    {"c_minus", s.type.c_minus}, {"c_plus", s.type.c_plus}, {"gamma", s.type.gamma},
                    {"shells", s.counts.size()}});
        } else {
          const auto s = est::lower_bound_cells(spec, n, o.p, h, radius, seed);
          json cubes = json::array();
          for (const auto& c : s.cubes)
            cubes.push_back({{"corner", std::vector<std::int64_t>(c.corner.begin(), c.corner.begin() + o.d)},
                             {"count", c.count}, {"mass", c.mass}, {"cost", c.cost},
                             {"goodbounds", c.goodbounds}, {"averagepoints", c.averagepoints}});
          j.update({{"sum", s.sum}, {"union", s.union_cost}, {"direct", s.direct}, {"chain_holds", s.chain_holds},
                    {"cubes", cubes}});
        }
        out.line(j.dump());
      }
      return 0;
    }
    return verify(o, out, log.get());
  } catch (const est::CapError& e) {
    std::cerr << "cap: " << e.what() << '\n';
    return exit_caps;
  } catch (const std::length_error& e) {
    std::cerr << "cap: " << e.what() << '\n';
    return exit_caps;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "internal: " << e.what() << '\n';
    return exit_internal;
  }
}
