// Command-line front end: single estimates (energy, corrsum, cover, recur)
// and the configured experiments.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "shiftdim/config.hpp"
#include "shiftdim/correlation.hpp"
#include "shiftdim/covering.hpp"
#include "shiftdim/energy.hpp"
#include "shiftdim/errors.hpp"
#include "shiftdim/experiments.hpp"
#include "shiftdim/parallel.hpp"
#include "shiftdim/random.hpp"
#include "shiftdim/recurrence.hpp"

using namespace shiftdim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFail = 2;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 1;
  std::string format = "csv";
  std::vector<std::string> overrides;
};

Config load_config(const Globals& g) {
  Config cfg = g.config_path.empty() ? Config{} : Config::load(g.config_path);
  for (const auto& kv : g.overrides) cfg.set(kv);
  if (g.seed) cfg.set("seed", std::to_string(*g.seed));
  if (!g.out.empty()) cfg.set("out", g.out);
  return cfg;
}

// --eps replaces the configured grid with an explicit list.
void apply_eps(Config& cfg, const std::vector<double>& eps) {
  if (eps.empty()) return;
  std::string list;
  for (double e : eps) list += fmt::format("{}{:.17g}", list.empty() ? "" : ",", e);
  cfg.set("grid.kind", "list");
  cfg.set("grid.values", list);
}

void emit(const Config& cfg, const std::string& name, const std::vector<CsvRow>& rows) {
  const std::string out = cfg.str("out", "");
  if (out.empty()) {
    write_csv(std::cout, rows);
    return;
  }
  std::filesystem::create_directories(out);
  std::ofstream f(std::filesystem::path(out) / (name + ".csv"));
  if (!f) throw std::runtime_error(fmt::format("cannot write into {}", out));
  write_csv(f, rows);
}

CsvRow to_row(const std::string& experiment, const EstimateReport& r, long n, double q) {
  return CsvRow{experiment, r.method, r.eps, n, q, r.value, r.std_error, r.n_samples, r.seed, r.flag};
}

int cmd_energy(const Globals& g, const std::vector<double>& eps) {
  Config cfg = load_config(g);
  apply_eps(cfg, eps);
  const ShiftMeasure m = build_measure(cfg);
  const ScaleGrid grid = build_grid(cfg, GridKind::inverse_square);
  EstimatorOptions opt;
  opt.cylinder_budget = static_cast<std::size_t>(cfg.integer("budget.cylinders", static_cast<long>(opt.cylinder_budget)));
  opt.n_inner = cfg.integer("budget.inner", opt.n_inner);
  opt.threads = g.threads;
  const long n_outer = cfg.integer("budget.samples", 10000);
  const std::uint64_t seed = cfg.seed("seed", 1);
  std::vector<CsvRow> rows;
  for (double q : cfg.reals("q", {2.0})) {
    const SlopeSeries series = gfd_proxy(m, q, grid, n_outer, seed, opt);
    for (const auto& p : series.points) {
      const bool mc = p.method == Method::monte_carlo;
      rows.push_back(CsvRow{"energy", p.method, p.eps, p.n, q, p.value, p.std_error, mc ? n_outer : 0, seed, p.flag});
      rows.push_back(CsvRow{"energy.quotient", p.method, p.eps, p.n, q, p.slope, 0.0, mc ? n_outer : 0, seed, p.flag});
    }
  }
  emit(cfg, "energy", rows);
  return kExitOk;
}

int cmd_corrsum(const Globals& g, const std::vector<double>& eps) {
  Config cfg = load_config(g);
  apply_eps(cfg, eps);
  const ShiftMeasure m = build_measure(cfg);
  const ScaleGrid grid = build_grid(cfg, GridKind::list);
  const std::uint64_t seed = cfg.seed("seed", 1);
  auto ns = cfg.integers("orbit.n", {1000});
  const long longest = *std::max_element(ns.begin(), ns.end());
  const SeqWindow x = [&] {
    if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) return p->atom(0);
    return sample_orbit(std::get<MarkovMeasure>(m), longest, seed);
  }();
  CorrelationOptions copt;
  copt.threads = g.threads;
  std::vector<CsvRow> rows;
  for (double q : cfg.reals("q", {2.0}))
    for (long n : ns)
      for (double e : grid.radii()) {
        auto r = correlation_sum(x, static_cast<int>(q), n, e, copt);
        r.seed = seed;
        rows.push_back(to_row("corrsum", r, n, q));
      }
  emit(cfg, "corrsum", rows);
  return kExitOk;
}

int cmd_cover(const Globals& g, const std::vector<double>& eps, bool mollified) {
  Config cfg = load_config(g);
  apply_eps(cfg, eps);
  const ShiftMeasure m = build_measure(cfg);
  const ScaleGrid grid = build_grid(cfg, GridKind::list);
  EstimatorOptions opt;
  opt.threads = g.threads;
  std::vector<CsvRow> rows;
  for (double s : cfg.reals("s", {0.5}))
    for (double e : grid.radii()) {
      const auto r = mollified ? mollified_covering_sum(m, s, e, opt) : covering_sum_greedy(m, s, e, opt);
      rows.push_back(to_row(mollified ? "cover.mollified" : "cover", r, 0, s));
    }
  emit(cfg, "cover", rows);
  return kExitOk;
}

int cmd_recur(const Globals& g, const std::vector<double>& eps) {
  Config cfg = load_config(g);
  apply_eps(cfg, eps);
  cfg.set("experiment", "recurrence");
  const auto res = run_recurrence(cfg, g.threads);
  emit(cfg, "recur", res.rows);
  for (const auto& line : res.summary) std::cerr << line << '\n';
  return kExitOk;
}

int cmd_experiment(const Globals& g, const std::string& name) {
  Config cfg = load_config(g);
  if (!name.empty()) cfg.set("experiment", name);
  const auto res = run_experiment(cfg, g.threads);
  const std::string out = cfg.str("out", "");
  if (out.empty())
    write_csv(std::cout, res.rows);
  else
    write_outputs(res, out);
  for (const auto& line : res.summary) std::cerr << line << '\n';
  std::cerr << res.name << ": " << (res.pass ? "PASS" : "FAIL") << '\n';
  return res.pass ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scaling functionals of shift-invariant measures on sequence space"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "master seed (overrides the config)");
  app.add_option("--out", g.out, "output directory; stdout when absent");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv"}));
  app.add_option("--set", g.overrides, "config override key=value (repeatable)");

  std::vector<double> eps;
  bool mollified = false;
  std::string experiment;

  auto* energy = app.add_subcommand("energy", "energy functional and its log-quotient over a scale grid");
  energy->add_option("--eps", eps, "explicit radii, overriding the grid");
  auto* corrsum = app.add_subcommand("corrsum", "q-correlation sums along a sampled orbit");
  corrsum->add_option("--eps", eps, "radii");
  auto* cover = app.add_subcommand("cover", "explicit covering sums");
  cover->add_option("--eps", eps, "radii");
  cover->add_flag("--mollified", mollified, "use the mollified ball mass as the cost");
  auto* recur = app.add_subcommand("recur", "first return times of a typical point");
  recur->add_option("--eps", eps, "radii");
  auto* exp = app.add_subcommand("experiment", "run a configured experiment");
  exp->add_option("name", experiment, "pesin-convergence | divergence | periodic-lower | sandwich | recurrence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*energy) return cmd_energy(g, eps);
    if (*corrsum) return cmd_corrsum(g, eps);
    if (*cover) return cmd_cover(g, eps, mollified);
    if (*recur) return cmd_recur(g, eps);
    if (*exp) return cmd_experiment(g, experiment);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
