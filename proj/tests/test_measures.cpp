#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "shiftdim/measures.hpp"

using namespace shiftdim;

namespace {

std::shared_ptr<const Alphabet> unit(std::size_t n) { return std::make_shared<const Alphabet>(Alphabet::equidistant(n)); }

CylinderWord word_of(const std::vector<int>& w) {
  std::vector<Symbol> s(w.begin(), w.end());
  return CylinderWord(std::move(s));
}

}  // namespace

TEST_CASE("perturbed cyclic transition matrix") {
  const auto m2 = build_markov(unit(2), 2, 0.5);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(m2.trans(i, j) == 0.5);

  const auto m3 = build_markov(unit(3), 3, 0.1);
  CHECK(m3.trans(0, 1) == doctest::Approx(0.9));
  CHECK(m3.trans(0, 0) == doctest::Approx(0.05));
  CHECK(m3.trans(0, 2) == doctest::Approx(0.05));
  CHECK(m3.trans(2, 0) == doctest::Approx(0.9));
  CHECK(m3.trans(2, 1) == doctest::Approx(0.05));
  CHECK(m3.trans(2, 2) == doctest::Approx(0.05));

  CHECK_THROWS(build_markov(unit(2), 2, 1.2));
  CHECK_THROWS(build_markov(unit(2), 2, 0.0));
  CHECK_THROWS(build_markov(unit(3), 2, 0.3, {1, 1}));
  CHECK_THROWS(build_markov(unit(2), 3, 0.3));
}

TEST_CASE("double stochasticity") {
  for (int s = 2; s <= 6; ++s)
    for (double k : {0.1, 0.3, 0.5, 0.9}) {
      const auto m = build_markov(unit(s), s, k);
      CHECK(stochasticity_defect(m) <= 1e-12);
      const auto ref = oracle::cyclic_matrix(s, k);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) CHECK(m.trans(i, j) == doctest::Approx(ref[i][j]).epsilon(1e-15));
    }
}

TEST_CASE("cylinder mass examples") {
  const ShiftMeasure m2 = build_markov(unit(2), 2, 0.5);
  for (const auto& w : std::vector<std::vector<int>>{{0, 0, 0}, {0, 1, 0}, {1, 1, 0}})
    CHECK(cylinder_mass(m2, word_of(w)) == doctest::Approx(0.125).epsilon(1e-15));

  const ShiftMeasure p3 = PeriodicOrbitMeasure(unit(4), {0, 1, 2});
  CHECK(cylinder_mass(p3, word_of({2, 0, 1})) == doctest::Approx(1.0 / 3.0));
  CHECK(cylinder_mass(p3, word_of({0, 2, 1})) == 0.0);
  CHECK(cylinder_mass(p3, word_of({0, 3, 1})) == 0.0);

  const ShiftMeasure m3 = build_markov(unit(4), 3, 0.2);
  CHECK(cylinder_mass(m3, word_of({0, 3, 1})) == 0.0);
  CHECK_THROWS(CylinderWord({0, 1}));
}

TEST_CASE("total mass and uniform marginals") {
  for (int s = 2; s <= 4; ++s)
    for (double k : {0.1, 0.3, 0.5})
      for (int n = 0; n <= 3; ++n) {
        const ShiftMeasure m = build_markov(unit(s), s, k);
        long double total = 0.0L;
        std::map<std::pair<int, int>, long double> marg;
        for_each_cylinder(m, n, kDefaultCylinderBudget, [&](std::span<const Symbol> w, double mass) {
          total += mass;
          for (int i = 0; i < 2 * n + 1; ++i) marg[{i, w[i]}] += mass;
          CHECK(mass == doctest::Approx(cylinder_mass(m, CylinderWord({w.begin(), w.end()}))).epsilon(1e-14));
        });
        CHECK(std::abs(static_cast<double>(total) - 1.0) <= 1e-12);
        for (const auto& [key, v] : marg) CHECK(std::abs(static_cast<double>(v) - 1.0 / s) <= 1e-12);
        // independent recursion
        long double rec = 0.0L;
        oracle::markov_words(s, k, 2 * n + 1, [&](const std::vector<int>& w, long double mass) {
          rec += mass;
          CHECK(std::abs(cylinder_mass(m, word_of(w)) - static_cast<double>(mass)) <= 1e-15);
        });
        CHECK(std::abs(static_cast<double>(rec) - 1.0) <= 1e-12);
      }
}

TEST_CASE("cylinder masses are shift invariant") {
  const ShiftMeasure m = build_markov(unit(3), 3, 0.3);
  // the same symbol string placed at -n..n or shifted one slot is the same product
  oracle::markov_words(3, 0.3, 5, [&](const std::vector<int>& w, long double) {
    const double centred = cylinder_mass(m, word_of(w));
    std::vector<int> padded = w;
    padded.push_back(0);
    padded.insert(padded.begin(), 0);
    double marginal = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        padded.front() = a;
        padded.back() = b;
        marginal += cylinder_mass(m, word_of(padded));
      }
    CHECK(marginal == doctest::Approx(centred).epsilon(1e-13));
  });
  const ShiftMeasure p = PeriodicOrbitMeasure(unit(5), {0, 1, 2, 3, 4});
  CHECK(cylinder_mass(p, word_of({4, 0, 1})) == cylinder_mass(p, word_of({0, 1, 2})));
}

TEST_CASE("orbit sampling") {
  const auto m = build_markov(unit(3), 3, 0.2);
  const auto a = sample_orbit(m, 200, 99), b = sample_orbit(m, 200, 99);
  CHECK(a.same_point(b));
  CHECK(std::ranges::equal(a.window(), b.window()));
  CHECK(a.materialize(-600, 600) == b.materialize(-600, 600));
  CHECK_FALSE(std::ranges::equal(a.window(), sample_orbit(m, 200, 100).window()));
  // a longer window from the same seed extends the shorter one
  const auto c = sample_orbit(m, 500, 99);
  CHECK(a.materialize(-500, 500) == c.materialize(-500, 500));
  CHECK_THROWS(sample_orbit(m, -1, 1));
}

TEST_CASE("empirical symbol frequencies are uniform") {
  const auto m = build_markov(unit(3), 3, 0.2);
  const auto x = sample_orbit(m, 50000, 2024);
  std::array<long, 3> count{};
  for (Symbol s : x.window()) ++count[s];
  for (long c : count) CHECK(std::abs(double(c) / double(x.window().size()) - 1.0 / 3.0) <= 0.01);
}

TEST_CASE("vanishing leakage gives cyclic paths") {
  const double kappa = 1e-9;
  const long transitions = 10000;
  // allowed non-cyclic count is floor(1e-5 * 1e4) = 0
  CHECK(oracle::binomial_upper_tail(transitions, kappa, 0) <= 0.01);
  const auto m = build_markov(unit(3), 3, kappa);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = sample_orbit(m, transitions / 2, seed);
    const auto w = x.window();
    long off = 0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) off += w[i + 1] != (w[i] + 1) % 3;
    CHECK(double(off) / double(transitions) <= 1e-5);
  }
}

TEST_CASE("minimum separation") {
  const ShiftMeasure m = build_markov(unit(3), 3, 0.2);
  CHECK(min_separation(m) == 1.0);
  auto line = std::make_shared<const Alphabet>(Alphabet::on_line({0.0, 0.25, 0.05, 1.0}));
  CHECK(min_separation(ShiftMeasure(PeriodicOrbitMeasure(line, {0, 1, 3}))) == doctest::Approx(0.25));
  CHECK_THROWS(min_separation(ShiftMeasure(PeriodicOrbitMeasure(line, {2}))));
  CHECK_THROWS(PeriodicOrbitMeasure(line, {1, 1}));
}

TEST_CASE("cylinder enumeration budget") {
  const ShiftMeasure m = build_markov(unit(4), 4, 0.2);
  CHECK_THROWS(for_each_cylinder(m, 6, 1000, [](auto, double) {}));
}
