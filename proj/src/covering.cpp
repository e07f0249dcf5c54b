#include "shiftdim/covering.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "shiftdim/errors.hpp"
#include "shiftdim/metric.hpp"
#include "shiftdim/mollified.hpp"

namespace shiftdim {
namespace {

void check_params(double s, double eps) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument(fmt::format("s must lie in (0,1), got {}", s));
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
}

double pow_s(double mass, double s) { return mass > 0.0 ? std::pow(mass, s) : 0.0; }

EstimateReport single_ball(double eps) {
  auto r = EstimateReport::exact(1.0, eps, Method::greedy_cover);
  r.n_samples = 1;
  return r;
}

template <class Cost>
EstimateReport atom_cover(const PeriodicOrbitMeasure& p, double s, double eps, Cost&& cost) {
  double lo = 0.0, hi = 0.0;
  bool unsure = false;
  for (std::size_t j = 0; j < p.period(); ++j) {
    const auto [a, c] = cost(p.atom(j));
    lo += pow_s(a, s);
    hi += pow_s(c, s);
    unsure = unsure || a != c;
  }
  EstimateReport r;
  r.value = hi;  // an upper bound must use the upper masses
  r.lower = lo;
  r.upper = hi;
  r.eps = eps;
  r.method = Method::greedy_cover;
  r.n_samples = static_cast<long>(p.period());
  if (unsure) r.flag = "indeterminate_membership";
  return r;
}

template <class Cost>
EstimateReport best_cover(const ShiftMeasure& m, double s, double eps, Cost&& cost) {
  check_params(s, eps);
  const bool one_ball = eps > space_diameter(alphabet_of(m));
  if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) {
    auto r = atom_cover(*p, s, eps, cost);
    if (one_ball && r.value > 1.0) return single_ball(eps);
    return r;
  }
  if (one_ball) return single_ball(eps);
  throw std::invalid_argument(
      "covering sums of Markov measures are only available for eps above the space diameter (no finite covering "
      "with computable ball masses exists below it)");
}

}  // namespace

double space_diameter(const Alphabet& alphabet) {
  const double d = alphabet.diameter();
  if (d >= 1.0) return total_weight();
  // coordinates with w(n) > d contribute d, the rest their full weight
  long n = static_cast<long>(std::floor(std::sqrt(1.0 / d - 1.0)));
  while (n > 0 && weight(n) <= d) --n;
  while (weight(n + 1) > d) ++n;
  // |i| <= n contribute d (2n+1 of them), |i| > n contribute w(i)
  return static_cast<double>(2 * n + 1) * d + 2.0 * tail_upper(n);
}

EstimateReport covering_sum_greedy(const ShiftMeasure& m, double s, double eps, const EstimatorOptions& opt) {
  return best_cover(m, s, eps, [&](const SeqWindow& c) {
    const auto b = ball_mass(m, c, eps, 0, opt);
    return std::pair{b.lower, b.upper};
  });
}

EstimateReport mollified_covering_sum(const ShiftMeasure& m, double s, double eps, const EstimatorOptions& opt) {
  return best_cover(m, s, eps, [&](const SeqWindow& c) {
    const auto f = mollified_ball_mass(m, c, eps, 0, opt);
    return std::pair{f.lower, f.upper};
  });
}

std::vector<SeqWindow> candidate_net(const PeriodicOrbitMeasure& m, std::size_t max_period, std::size_t cap) {
  std::vector<SeqWindow> net = m.atoms();
  const auto& syms = m.word();
  const std::size_t k = syms.size();
  // Two globally periodic points agree iff they agree on one common period.
  auto already = [&](const SeqWindow& w) {
    return std::any_of(net.begin(), net.end(), [&](const SeqWindow& o) {
      const auto period = static_cast<long>(std::lcm(o.tail_period(), w.tail_period()));
      for (long i = 0; i < period; ++i)
        if (o.at(i) != w.at(i)) return false;
      return true;
    });
  };
  for (std::size_t p = 1; p <= max_period && net.size() < cap; ++p) {
    std::vector<std::size_t> digits(p, 0);
    while (net.size() < cap) {
      std::vector<Symbol> word(p);
      for (std::size_t i = 0; i < p; ++i) word[i] = syms[digits[i]];
      SeqWindow w = SeqWindow::periodic(m.alphabet_ptr(), word);
      if (!already(w)) net.push_back(std::move(w));
      std::size_t t = 0;
      while (t < p && ++digits[t] == k) digits[t++] = 0;
      if (t == p) break;
    }
  }
  return net;
}

NetInfimum exhaustive_net_infimum(const PeriodicOrbitMeasure& m, std::span<const SeqWindow> net, double s, double eps,
                                  CoverCost cost, const EstimatorOptions& opt) {
  check_params(s, eps);
  const std::size_t k = m.period();
  if (k > 20) throw BudgetExceeded("exhaustive covering limited to orbits of period <= 20");
  const auto atoms = m.atoms();
  const ShiftMeasure mu{m};
  const std::size_t full = (std::size_t{1} << k) - 1;

  NetInfimum out;
  std::vector<std::size_t> masks(net.size(), 0);
  std::vector<double> costs(net.size(), 0.0);
  for (std::size_t c = 0; c < net.size(); ++c) {
    for (std::size_t j = 0; j < k; ++j) {
      switch (classify(net[c], atoms[j], eps, Ball::open, opt.tol)) {
        case Membership::inside: masks[c] |= std::size_t{1} << j; break;
        case Membership::indeterminate: out.flag = "indeterminate_membership"; break;
        case Membership::outside: break;
      }
    }
    const double mass = static_cast<double>(std::popcount(masks[c])) * m.atom_mass();
    if (cost == CoverCost::ball_mass) {
      costs[c] = pow_s(mass, s);
    } else {
      costs[c] = pow_s(mollified_ball_mass(mu, net[c], eps, 0, opt).upper, s);
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(full + 1, inf);
  std::vector<std::pair<std::size_t, std::size_t>> from(full + 1, {0, 0});
  dp[0] = 0.0;
  for (std::size_t mask = 0; mask <= full; ++mask) {
    if (dp[mask] == inf) continue;
    for (std::size_t c = 0; c < net.size(); ++c) {
      if (masks[c] == 0) continue;
      const std::size_t next = mask | masks[c];
      if (next == mask) continue;
      if (dp[mask] + costs[c] < dp[next]) {
        dp[next] = dp[mask] + costs[c];
        from[next] = {mask, c};
      }
    }
  }
  if (dp[full] == inf) throw std::logic_error("candidate net does not cover the atoms");
  out.value = dp[full];
  for (std::size_t mask = full; mask != 0; mask = from[mask].first) out.centres.push_back(from[mask].second);
  std::reverse(out.centres.begin(), out.centres.end());
  return out;
}

}  // namespace shiftdim
