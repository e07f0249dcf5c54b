#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "shiftdim/alphabet.hpp"
#include "shiftdim/errors.hpp"
#include "shiftdim/metric.hpp"
#include "shiftdim/scale_grid.hpp"
#include "shiftdim/sequence.hpp"

using namespace shiftdim;

namespace {

std::shared_ptr<const Alphabet> unit(std::size_t n) { return std::make_shared<const Alphabet>(Alphabet::equidistant(n)); }

SeqWindow with_center(const std::shared_ptr<const Alphabet>& al, Symbol background, long pos, Symbol sym) {
  const long n = std::abs(pos);
  std::vector<Symbol> w(2 * n + 1, background);
  w[pos + n] = sym;
  return SeqWindow(al, std::move(w), ConstantExtension{background});
}

}  // namespace

TEST_CASE("alphabet validation and file format") {
  CHECK_THROWS(Alphabet::equidistant(1));
  CHECK_THROWS(Alphabet::on_line({0.0, 0.0, 1.0}));
  std::istringstream bad("3\n0 1 5\n1 0 1\n5 1 0\n");
  CHECK_THROWS(Alphabet::parse(bad));  // triangle inequality
  std::istringstream good("3\n0 1 2\n1 0 1\n2 1 0\n");
  const Alphabet a = Alphabet::parse(good);
  CHECK(a.size() == 3);
  CHECK(a.separation() == 1.0);
  CHECK(a.diameter() == 2.0);
  CHECK(Alphabet::on_line({0.0, 0.25, 1.0}).separation() == doctest::Approx(0.25));
}

TEST_CASE("tail bounds bracket the weight series") {
  const long double full = oracle::full_weight_sum();
  const long double rest = (full - 1.0L) / 2.0L;  // sum over m >= 1
  CHECK(1.0 + 2.0 * tail_lower(0) <= static_cast<double>(full) + 1e-15);
  CHECK(1.0 + 2.0 * tail_upper(0) >= static_cast<double>(full) - 1e-15);
  for (long n : {1L, 10L, 1000L, 70000L, 1L << 20}) {
    const auto [lo, hi] = oracle::half_weight_bracket(n);
    CHECK(lo <= rest + 1e-18L);
    CHECK(rest <= hi + 1e-18L);
    const double tail = static_cast<double>(rest - oracle::weight_prefix(n));
    CHECK(tail_lower(n) <= tail * (1 + 1e-12));
    CHECK(tail_upper(n) >= tail * (1 - 1e-12));
    CHECK(tail_lower(n) <= tail_upper(n));
  }
}

TEST_CASE("distance examples") {
  auto al = unit(3);
  const auto x = SeqWindow::periodic(al, {0, 1, 2});
  CHECK(distance(x, x, 1e-9) == 0.0);

  const auto a = SeqWindow::constant(al, 0);
  const auto b = with_center(al, 0, 0, 2);
  CHECK(distance(a, b, 1e-12) == doctest::Approx(1.0).epsilon(1e-12));

  // every coordinate differs: 1 + 2 sum 1/(n^2+1)
  const auto y = SeqWindow::periodic(al, {1, 2, 0});
  const auto bd = distance_bounds(x, y, 1e-9);
  CHECK(bd.upper - bd.lower <= 1e-9);
  CHECK(bd.lower <= 3.153348094937162 + 1e-12);
  CHECK(bd.upper >= 3.153348094937162 - 1e-12);
  CHECK(std::abs(distance(x, y, 1e-9) - static_cast<double>(oracle::full_weight_sum())) <= 1e-9);
}

TEST_CASE("distance against a brute partial sum on periodic pairs") {
  auto al = std::make_shared<const Alphabet>(Alphabet::on_line({0.0, 0.003, 0.5, 2.0}));
  std::mt19937 gen(7);
  for (int trial = 0; trial < 12; ++trial) {
    auto word = [&](int k) {
      std::vector<Symbol> w(k);
      for (auto& s : w) s = static_cast<Symbol>(gen() % 4);
      return w;
    };
    const auto wx = word(1 + trial % 4), wy = word(2 + trial % 3);
    const auto x = SeqWindow::periodic(al, wx), y = SeqWindow::periodic(al, wy);
    const long N = 200000;
    long double partial = 0.0L;
    for (long n = -N; n <= N; ++n)
      partial += std::min<long double>(1.0L / ((long double)n * n + 1.0L), al->d(x.at(n), y.at(n)));
    const long double rest = std::numbers::pi_v<long double> - 2.0L * std::atan((long double)N);
    const double r = distance(x, y, 1e-9);
    CHECK(r >= static_cast<double>(partial) - 1e-9);
    CHECK(r <= static_cast<double>(partial + rest) + 1e-9);
  }
}

TEST_CASE("window cutoff") {
  CHECK(window_cutoff(0.6) == 0);
  CHECK(window_cutoff(0.2) == 1);
  CHECK(window_cutoff(0.05) == 4);
  CHECK_THROWS(window_cutoff(0.0));
  CHECK_THROWS(window_cutoff(1.0));
  for (long k = 1; k <= 2000; ++k) CHECK(window_cutoff(1.0 / (double(k) * k + 1.0)) == k - 1);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-9.0, 0.0);
  double prev_eps = 0.0;
  long prev = 0;
  std::vector<double> eps(400);
  for (auto& e : eps) e = std::pow(10.0, u(gen)) * 0.999;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (double e : eps) {
    const long n = window_cutoff(e);
    CHECK(n == oracle::scan_cutoff(e));
    if (prev_eps > 0.0) CHECK(n >= prev);
    prev = n;
    prev_eps = e;
  }
}

TEST_CASE("cylinder ball membership") {
  auto al = unit(3);
  const auto x = SeqWindow::periodic(al, {0, 1, 2});
  for (long n : {0L, 3L, 11L}) CHECK(in_cylinder_ball(x, x, 0.01, n));
  const auto a = SeqWindow::constant(al, 0);
  for (long n : {0L, 2L, 5L}) CHECK(in_cylinder_ball(a, with_center(al, 0, n + 1, 1), 0.5, n));
  CHECK_FALSE(in_cylinder_ball(a, with_center(al, 0, 0, 1), al->separation() / 2.0, 0));
  CHECK_FALSE(in_cylinder_ball(a, with_center(al, 0, 0, 1), al->separation(), 0));  // strict
  auto other = unit(3);
  auto al4 = unit(4);
  CHECK_THROWS(in_cylinder_ball(a, SeqWindow::constant(al4, 0), 0.5, 0));
  CHECK(in_cylinder_ball(a, SeqWindow::constant(other, 0), 0.5, 0));  // equal alphabets
}

TEST_CASE("metric axioms on sampled triples") {
  auto al = std::make_shared<const Alphabet>(Alphabet::on_line({0.0, 0.1, 0.35, 1.4}));
  std::mt19937 gen(11);
  auto draw = [&] {
    std::vector<Symbol> w(1 + gen() % 6);
    for (auto& s : w) s = static_cast<Symbol>(gen() % 4);
    return SeqWindow::periodic(al, w);
  };
  const double tol = 1e-9;
  for (int t = 0; t < 60; ++t) {
    const auto x = draw(), y = draw(), z = draw();
    CHECK(distance(x, y, tol) == doctest::Approx(distance(y, x, tol)).epsilon(0).scale(0).epsilon(2 * tol));
    CHECK(distance(x, z, tol) <= distance(x, y, tol) + distance(y, z, tol) + 3 * tol);
    CHECK(distance(x, x, tol) <= tol);
  }
}

TEST_CASE("small distance implies cylinder-window membership") {
  auto al = std::make_shared<const Alphabet>(Alphabet::on_line({0.0, 0.02, 0.3, 1.0}));
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> ue(0.001, 0.99);
  int hits = 0;
  for (int t = 0; t < 400; ++t) {
    std::vector<Symbol> wx(5), wy(5);
    for (int i = 0; i < 5; ++i) {
      wx[i] = static_cast<Symbol>(gen() % 4);
      wy[i] = gen() % 3 == 0 ? static_cast<Symbol>(gen() % 4) : wx[i];
    }
    const auto x = SeqWindow::periodic(al, wx), y = SeqWindow::periodic(al, wy);
    const double eps = ue(gen);
    if (distance(x, y, 1e-9) < eps - 1e-9) {
      ++hits;
      CHECK(in_cylinder_ball(x, y, eps, window_cutoff(eps)));
    }
  }
  CHECK(hits > 20);
}

TEST_CASE("shift convention") {
  auto al = unit(3);
  const auto x = SeqWindow::periodic(al, {0, 1, 2});
  const auto y = shift(x, 1);
  for (long m = -5; m <= 5; ++m) CHECK(y.at(m) == x.at(m - 1));
  CHECK(distance(shift(x, 3), x, 1e-9) <= 1e-9);
}

TEST_CASE("scale grids") {
  const auto g = ScaleGrid::inverse_square(2, 12);
  REQUIRE(g.size() == 11);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k = 2.0 + static_cast<double>(i);
    CHECK(g[i] == 1.0 / (k * k + 1.0));
  }
  const auto d = ScaleGrid::dyadic(0.9, 20);
  CHECK(d.size() == 20);
  CHECK(d[19] == doctest::Approx(0.9 * std::ldexp(1.0, -19)));
  CHECK_THROWS(ScaleGrid::from_list({0.1, 0.2}));
  CHECK_THROWS(ScaleGrid::from_list({1.0, 0.5}));
}
