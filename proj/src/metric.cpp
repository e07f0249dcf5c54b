#include "shiftdim/metric.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace shiftdim {
namespace {

constexpr long kTableSize = 1L << 16;
constexpr long kMaxWalk = 1L << 26;

// tail[n] = sum_{m > n} 1/(m^2+1) for n < kTableSize, from the closed form of the
// full series minus a long-double prefix sum.
const std::vector<double>& tail_table() {
  static const std::vector<double> table = [] {
    const long double pi = std::numbers::pi_v<long double>;
    const long double one_sided = (pi / std::tanh(pi) - 1.0L) / 2.0L;
    std::vector<double> t(kTableSize);
    long double prefix = 0.0L;
    for (long n = 0; n < kTableSize; ++n) {
      if (n > 0) prefix += 1.0L / (static_cast<long double>(n) * n + 1.0L);
      t[n] = static_cast<double>(one_sided - prefix);
    }
    return t;
  }();
  return table;
}

}  // namespace

double total_weight() {
  return std::numbers::pi / std::tanh(std::numbers::pi);
}

double tail_upper(long n) {
  if (n < 0) throw std::invalid_argument("tail index must be nonnegative");
  if (n < kTableSize) return tail_table()[n];
  // sum_{m>n} f(m) <= integral_n^inf dx/(x^2+1) = atan(1/n)
  return std::atan(1.0 / static_cast<double>(n));
}

double tail_lower(long n) {
  if (n < 0) throw std::invalid_argument("tail index must be nonnegative");
  if (n < kTableSize) return tail_table()[n];
  return std::atan(1.0 / static_cast<double>(n + 1));
}

long window_cutoff(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument(fmt::format("window_cutoff needs 0 < eps < 1, got {}", eps));
  long n0 = static_cast<long>(std::floor(std::sqrt(1.0 / eps - 1.0)));
  while (n0 > 0 && weight(n0) <= eps) --n0;
  while (weight(n0 + 1) > eps) ++n0;
  return n0;
}

long inner_cutoff(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("inner_cutoff needs eps > 0");
  if (2.0 * tail_upper(0) < eps) return 0;
  // tail_upper(n) ~ 1/n, so n ~ 2/eps; bracket then bisect on the monotone bound.
  long lo = 0, hi = 1;
  while (!(2.0 * tail_upper(hi) < eps)) {
    lo = hi;
    hi *= 2;
    if (hi > kMaxWalk) throw std::invalid_argument(fmt::format("eps {} too small for an inner window", eps));
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (2.0 * tail_upper(mid) < eps ? hi : lo) = mid;
  }
  return hi;
}

long cutoff_for_tolerance(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (2.0 * tail_upper(0) <= tol) return 0;
  long lo = 0, hi = 1;
  while (!(2.0 * tail_upper(hi) <= tol)) {
    lo = hi;
    hi *= 2;
    if (hi > kMaxWalk)
      throw std::invalid_argument(fmt::format("tolerance {} needs a walk longer than {} coordinates", tol, kMaxWalk));
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    (2.0 * tail_upper(mid) <= tol ? hi : lo) = mid;
  }
  return hi;
}

long max_walk_length() { return kMaxWalk; }

}  // namespace shiftdim
