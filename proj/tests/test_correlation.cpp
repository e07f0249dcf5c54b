#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "shiftdim/correlation.hpp"
#include "shiftdim/errors.hpp"
#include "shiftdim/measures.hpp"

using namespace shiftdim;

namespace {

std::shared_ptr<const Alphabet> unit(std::size_t n) { return std::make_shared<const Alphabet>(Alphabet::equidistant(n)); }

}  // namespace

TEST_CASE("correlation sum limits") {
  const auto m = build_markov(unit(3), 3, 0.2);
  const auto x = sample_orbit(m, 100, 4);
  for (long n : {5L, 40L}) {
    const double big = 4.0;  // above the space diameter
    CHECK(correlation_sum(x, 2, n, big).value == doctest::Approx(double((n + 1) * (n + 1)) / double(n * n)));
    for (int q : {2, 3, 4}) {
      const auto r = correlation_sum(x, q, n, 1e-4);
      CHECK(r.value == doctest::Approx(double(n + 1) / std::pow(double(n), q)));
      CHECK(r.method == Method::clique_count);
      CHECK(r.std_error == 0.0);
    }
  }
}

TEST_CASE("period two orbit") {
  const auto x = SeqWindow::periodic(unit(2), {0, 1});
  // classes {0,2,4} and {1,3}: 9 + 4 ordered pairs over 16
  CHECK(correlation_sum(x, 2, 4, 0.5).value == doctest::Approx(13.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("clique counting against brute force") {
  auto al = std::make_shared<const Alphabet>(Alphabet::on_line({0.0, 0.01, 0.3, 1.0}));
  const auto m = build_markov(al, 4, 0.4);
  const auto x = sample_orbit(m, 60, 8);
  const int n = 24;
  // partial sums over |m| <= L; the analytic tail is the bracket width
  const long L = 400;
  const double tail = 2.0 * (std::numbers::pi / 2.0 - std::atan(double(L)));
  const auto seq = x.materialize(-L - n, L + n);
  auto at = [&](long i) { return seq[i + L + n]; };
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      double acc = 0.0;
      for (long k = -L; k <= L; ++k) acc += std::min(1.0 / (double(k) * k + 1.0), al->d(at(k - i), at(k - j)));
      d[i][j] = acc;
    }
  // radii in gaps of the distance list, clear of every bracket
  std::vector<double> sorted;
  for (auto& row : d) sorted.insert(sorted.end(), row.begin(), row.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> radii;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] > 3 * tail) radii.push_back(sorted[i - 1] + 1.5 * tail);
  REQUIRE(radii.size() >= 4);
  for (std::size_t r = 0; r < radii.size(); r += radii.size() / 4) {
    const double eps = radii[r];
    for (int q : {2, 3, 4}) {
      const long brute = oracle::brute_cliques(n, q, [&](int a, int b) { return d[a][b] <= eps; });
      CHECK(correlation_sum(x, q, n, eps).value == doctest::Approx(double(brute) / std::pow(double(n), q)).epsilon(1e-14));
    }
  }
}

TEST_CASE("reversing the orbit segment") {
  // reversal maps the points T^i x' onto T^{-i} x, i.e. the segment of T^{-n} x
  auto al = std::make_shared<const Alphabet>(Alphabet::on_line({0.0, 0.2, 0.25, 0.9}));
  const std::vector<Symbol> w{0, 2, 1, 1, 3, 0, 2};
  std::vector<Symbol> rw(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) rw[i] = w[(w.size() - i) % w.size()];
  const auto x = SeqWindow::periodic(al, w), xr = SeqWindow::periodic(al, rw);
  for (long m = -20; m <= 20; ++m) REQUIRE(xr.at(m) == x.at(-m));
  for (int q : {2, 3})
    for (long n : {6L, 13L})
      for (double eps : {0.1, 0.6, 1.1})
        CHECK(correlation_sum(xr, q, n, eps).value == correlation_sum(shift(x, -n), q, n, eps).value);
}

TEST_CASE("correlation guards and threads") {
  const auto m = build_markov(unit(3), 3, 0.2);
  const auto x = sample_orbit(m, 10, 1);
  CHECK_THROWS_AS(correlation_sum(x, 5, 2001, 0.1), BudgetExceeded);
  CHECK_THROWS(correlation_sum(x, 1, 10, 0.1));
  const auto y = sample_orbit(m, 300, 9);
  CorrelationOptions four;
  four.threads = 4;
  for (double eps : {0.05, 0.3})
    CHECK(correlation_sum(y, 3, 300, eps).value == correlation_sum(y, 3, 300, eps, four).value);
}

TEST_CASE("correlation dimension proxy") {
  const auto g = ScaleGrid::from_list({1e-1, 1e-2, 1e-3, 1e-4});
  // fixed point: C_q = ((n+1)/n)^q, so the quotient is the normalization term only
  const auto fixed = SeqWindow::constant(unit(2), 1);
  const long n = 50;
  for (int q : {2, 3})
    for (const auto& p : correlation_dimension_proxy(fixed, q, n, g).points)
      CHECK(p.slope == doctest::Approx(q * std::log(double(n + 1) / n) / ((q - 1) * std::log(p.eps))));
  // periodic orbit: numerator constant once eps is below the atom distances
  const auto per = SeqWindow::periodic(unit(3), {0, 1, 2});
  const auto s = correlation_dimension_proxy(per, 2, 30, g);
  for (std::size_t i = 1; i < s.points.size(); ++i) {
    CHECK(s.points[i].value == s.points[0].value);
    CHECK(std::abs(s.points[i].slope) < std::abs(s.points[i - 1].slope));
  }
}
