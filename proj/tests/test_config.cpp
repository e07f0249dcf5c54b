#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "shiftdim/config.hpp"
#include "shiftdim/experiments.hpp"

using namespace shiftdim;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in);
}

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  write_csv(out, r.rows);
  return out.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse("# comment\nexperiment = sandwich\nq = 1.5, 2,3\nseed=42\n\nmeasure.states = a,b\n");
  CHECK(c.str("experiment", "") == "sandwich");
  CHECK(c.reals("q", {}) == std::vector<double>{1.5, 2.0, 3.0});
  CHECK(c.seed("seed", 0) == 42);
  CHECK(c.strings("measure.states", {}) == std::vector<std::string>{"a", "b"});
  CHECK(c.integer("orbit.n", 7) == 7);
  CHECK_THROWS(parse("colour = red\n"));
  CHECK_THROWS(parse("q = 2\nq = 3\n"));
  CHECK_THROWS(parse("q 2\n"));
  CHECK_THROWS(parse("seed = -1\n").seed("seed", 0));
  CHECK_THROWS(parse("q = 2x\n").real("q", 0));
  Config o = c;
  o.set("q=4");
  CHECK(o.real("q", 0) == 4.0);
  CHECK_THROWS(o.set("nonsense=1"));
}

TEST_CASE("measure and grid construction") {
  auto c = parse("measure.kind = periodic\nmeasure.period = 3\nalphabet = line:0,0.5,2,3\n");
  const auto m = build_measure(c);
  REQUIRE(std::holds_alternative<PeriodicOrbitMeasure>(m));
  CHECK(std::get<PeriodicOrbitMeasure>(m).period() == 3);
  CHECK(alphabet_of(m).size() == 4);
  c = parse("measure.kind = markov\nmeasure.kappa = 0.3\nmeasure.s = 4\n");
  CHECK(std::get<MarkovMeasure>(build_measure(c)).size() == 4);
  CHECK_THROWS(build_measure(parse("measure.kind = gibbs\n")));
  CHECK_THROWS(build_measure(parse("measure.kind = markov\nmeasure.kappa = 1.5\n")));
  CHECK_THROWS(build_measure(parse("measure.kind = markov\nmeasure.s = 4\nalphabet = equidistant:3\n")));
  const auto g = build_grid(parse("grid.kind = inverse_square\ngrid.start = 2\ngrid.count = 11\n"), GridKind::dyadic);
  CHECK(g.size() == 11);
  CHECK(g[0] == 0.2);
  CHECK(build_grid(parse(""), GridKind::dyadic).kind() == GridKind::dyadic);
}

TEST_CASE("experiments reject bad configurations") {
  CHECK_THROWS(run_experiment(parse("experiment = nope\n")));
  CHECK_THROWS(run_pesin(parse("measure.kind = periodic\n")));
  CHECK_THROWS(run_pesin(parse("q = 4\n")));
  CHECK_THROWS(run_pesin(parse("eps.rel = 1.5\n")));
  CHECK_THROWS(run_recurrence(parse("measure.kind = periodic\n")));  // horizon is required
  CHECK_THROWS(run_periodic_lower(parse("measure.kind = markov\n")));
}

TEST_CASE("identical configuration gives identical output") {
  const std::string text =
      "experiment = pesin-convergence\nmeasure.kappa = 0.2\norbit.n = 50,200\nbudget.samples = 200\nseed = 5\n";
  const auto a = run_experiment(parse(text)), b = run_experiment(parse(text));
  CHECK(csv_of(a) == csv_of(b));
  const auto c = run_experiment(parse(text), 3);
  CHECK(csv_of(a) == csv_of(c));
  const auto d = run_experiment(parse(text + "budget.inner = 10\n"));
  CHECK(csv_of(a) == csv_of(d));  // inner budget only matters past the separation

  const auto dir = std::filesystem::temp_directory_path() / "shiftdim_cfg_test";
  std::filesystem::remove_all(dir);
  write_outputs(a, dir);
  CHECK(std::filesystem::exists(dir / "pesin-convergence.csv"));
  std::ifstream manifest(dir / "plot" / "manifest.txt");
  std::string header, line;
  std::getline(manifest, header);
  REQUIRE(std::getline(manifest, line));
  CHECK(std::filesystem::exists(dir / "plot" / line.substr(0, line.find('\t'))));
  std::filesystem::remove_all(dir);
}

TEST_CASE("periodic lower experiment") {
  const auto r = run_experiment(parse("experiment = periodic-lower\nmeasure.kind = periodic\nmeasure.period = 5\n"));
  CHECK(r.pass);
  CHECK(r.rows.front().flag.empty());
}
