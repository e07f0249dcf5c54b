#include <doctest.h>

#include <cmath>

#include "shiftdim/energy.hpp"
#include "shiftdim/measures.hpp"
#include "shiftdim/recurrence.hpp"

using namespace shiftdim;

namespace {

std::shared_ptr<const Alphabet> unit(std::size_t n) { return std::make_shared<const Alphabet>(Alphabet::equidistant(n)); }

}  // namespace

TEST_CASE("return time examples") {
  const auto fixed = SeqWindow::constant(unit(2), 0);
  for (double r : {1e-6, 0.1, 2.0}) CHECK(return_time(fixed, r, 10).tau == 1L);
  for (long k : {2L, 3L, 5L}) {
    std::vector<Symbol> w(k);
    for (long i = 0; i < k; ++i) w[i] = static_cast<Symbol>(i);
    const auto x = SeqWindow::periodic(unit(5), w);
    for (double r : {1e-6, 1e-3, 0.5, 2.0}) CHECK(return_time(x, r, 100).tau == k);
    CHECK(return_time(x, 4.0, 100).tau == 1L);  // beyond the orbit diameter
    CHECK_FALSE(return_time(x, 1e-3, k - 1).tau.has_value());
  }
  CHECK_THROWS(return_time(fixed, 0.0, 10));
  CHECK_THROWS(return_time(fixed, 0.1, 0));
}

TEST_CASE("return time is nonincreasing in the radius") {
  const auto m = build_markov(unit(3), 3, 0.2);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto x = sample_orbit(m, 50, seed);
    std::optional<long> prev;
    for (double r : {0.9, 0.5, 0.2, 0.1, 0.05, 0.02}) {
      const auto rec = return_time(x, r, 20000);
      if (!rec.tau || !rec.flag.empty()) continue;
      if (prev) CHECK(*rec.tau >= *prev);
      prev = rec.tau;
    }
  }
}

TEST_CASE("recurrence rates") {
  const auto g = ScaleGrid::from_list({1e-1, 1e-2, 1e-4, 1e-6});
  std::vector<Symbol> w{0, 1, 2, 3, 4};
  const auto per = SeqWindow::periodic(unit(5), w);
  const auto rates = recurrence_rates(per, g, 100);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(rates.quotients[i] == doctest::Approx(std::log(5.0) / -std::log(g[i])).epsilon(1e-14));
  CHECK(rates.quotients.back() == doctest::Approx(0.1165).epsilon(1e-3));
  const auto fixed = recurrence_rates(SeqWindow::constant(unit(2), 0), g, 10);
  CHECK(fixed.lower == 0.0);
  CHECK(fixed.upper == 0.0);
  CHECK_THROWS(recurrence_rates(per, g, 3));  // nothing returns within the horizon
}

TEST_CASE("recurrence along a Markov orbit") {
  const ShiftMeasure m = build_markov(unit(3), 3, 0.2);
  const auto x = sample_orbit(std::get<MarkovMeasure>(m), 100, 12);
  std::vector<double> radii;
  for (double r = 0.5; r >= 1.0 / 101.0; r /= 1.6) radii.push_back(r);
  const long horizon = 100000;
  const auto rates = recurrence_rates(x, ScaleGrid::from_list(radii), horizon);
  CHECK(rates.lower >= 0.0);
  CHECK(rates.lower <= rates.upper);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const auto& rec = rates.records[i];
    if (rec.tau) {
      CHECK(std::isfinite(rates.quotients[i]));
      CHECK(*rec.tau <= horizon);
    } else {
      CHECK(rec.flag == "not_found");
      CHECK(std::isnan(rates.quotients[i]));
      // a ball this light is not expected back within the horizon
      CHECK(ball_mass(m, x, radii[i], 1).estimate < 1e-6);
    }
  }
  CHECK(rates.records.front().tau.has_value());
  CHECK_FALSE(rates.records.back().tau.has_value());
}
