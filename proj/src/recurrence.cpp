#include "shiftdim/recurrence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "shiftdim/parallel.hpp"

namespace shiftdim {
namespace {

ReturnRecord scan(Trajectory& t, const Alphabet& al, double radius, long horizon, double tol) {
  ReturnRecord rec;
  rec.radius = radius;
  rec.horizon = horizon;
  const PointRef origin{&t, 0};
  for (long k = 1; k <= horizon; ++k) {
    const PointRef moved{&t, k};
    const auto b = bound_distance(al, moved, origin, WalkTarget{.tol = tol, .threshold = radius, .ball = Ball::open});
    const auto verdict = membership(b, radius, Ball::open);
    if (verdict == Membership::outside) continue;
    rec.tau = k;
    if (verdict == Membership::indeterminate) rec.flag = "indeterminate";
    return rec;
  }
  rec.flag = "not_found";
  return rec;
}

void check(double radius, long horizon) {
  if (!(radius > 0.0)) throw std::invalid_argument("return radius must be positive");
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
}

}  // namespace

ReturnRecord return_time(const SeqWindow& x, double radius, long horizon, double tol) {
  check(radius, horizon);
  Trajectory t(x);
  return scan(t, x.alphabet(), radius, horizon, tol);
}

RecurrenceRates recurrence_rates(const SeqWindow& x, const ScaleGrid& grid, long horizon, double tol,
                                 unsigned threads) {
  check(grid[0], horizon);
  RecurrenceRates out;
  out.records.resize(grid.size());
  threads = std::max(1u, threads);
  std::vector<Trajectory> caches(threads, Trajectory(x));
  parallel_for(grid.size(), threads, [&](std::size_t i, unsigned w) {
    out.records[i] = scan(caches[w], x.alphabet(), grid[i], horizon, tol);
  });

  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.lower = out.upper = nan;
  for (const auto& rec : out.records) {
    if (!rec.flag.empty() || !rec.tau) {
      out.quotients.push_back(nan);
      continue;
    }
    const double qv = std::log(static_cast<double>(*rec.tau)) / -std::log(rec.radius);
    out.quotients.push_back(qv);
    if (!(out.lower <= qv)) out.lower = qv;
    if (!(out.upper >= qv)) out.upper = qv;
  }
  if (std::isnan(out.lower)) throw std::runtime_error("no grid scale produced a decided return time within the horizon");
  return out;
}

}  // namespace shiftdim
