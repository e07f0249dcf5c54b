#include "shiftdim/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "shiftdim/errors.hpp"
#include "shiftdim/metric.hpp"
#include "shiftdim/parallel.hpp"
#include "shiftdim/random.hpp"

namespace shiftdim {
namespace {

constexpr std::uint64_t kTagOuter = 0x6f75746572;       // "outer"
constexpr std::uint64_t kTagCompletion = 0x636f6d706c;  // "compl"

void check_markov_params(std::size_t s, double kappa, long n) {
  if (s < 2) throw std::invalid_argument("s must be at least 2");
  if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("kappa must lie in (0,1)");
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

struct Stats {
  double mean = 0.0;
  double std_error = 0.0;
};

// Mean and standard error of the mean, summed in index order.
Stats mean_stats(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(n)};
}

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

BallMass periodic_ball_mass(const PeriodicOrbitMeasure& p, const SeqWindow& x, double eps, double tol) {
  long inside = 0, unsure = 0;
  for (std::size_t j = 0; j < p.period(); ++j) {
    switch (classify(p.atom(j), x, eps, Ball::open, tol)) {
      case Membership::inside: ++inside; break;
      case Membership::indeterminate: ++unsure; break;
      case Membership::outside: break;
    }
  }
  BallMass b;
  b.lower = static_cast<double>(inside) * p.atom_mass();
  b.upper = static_cast<double>(inside + unsure) * p.atom_mass();
  b.estimate = 0.5 * (b.lower + b.upper);
  b.cylinder_lower = b.lower;
  b.cylinder_upper = b.upper;
  return b;
}

// Lazily filled per-depth costs min{w(n), d(x_{+-n}, state)}, stored flat.
class CostTable {
public:
  CostTable(const MarkovMeasure& m, const SeqWindow& x) : m_(m), traj_(x) {}

  const double* forward(long n) { return fill(n) + 0; }
  const double* backward(long n) { return fill(n) + m_.size(); }
  Symbol x(long i) { return traj_.at(i); }

private:
  const double* fill(long n) {
    const std::size_t s = m_.size();
    while (depth_ <= n) {
      const double cap = weight(depth_);
      const Symbol xf = traj_.at(depth_), xb = traj_.at(-depth_);
      for (std::size_t j = 0; j < s; ++j) rows_.push_back(std::min(cap, m_.alphabet().d(xf, m_.states()[j])));
      for (std::size_t j = 0; j < s; ++j) rows_.push_back(std::min(cap, m_.alphabet().d(xb, m_.states()[j])));
      ++depth_;
    }
    return rows_.data() + 2 * s * static_cast<std::size_t>(n);
  }

  const MarkovMeasure& m_;
  Trajectory traj_;
  std::vector<double> rows_;
  long depth_ = 0;
};

// mu(B^{n0}(x, eps)) by a transfer recursion over the coordinate window.
double window_mass(const MarkovMeasure& m, CostTable& costs, double eps) {
  if (!(eps < 1.0)) return 1.0;
  const long n0 = window_cutoff(eps);
  const std::size_t s = m.size();
  const auto& al = m.alphabet();
  auto allowed = [&](long i, std::size_t j) { return al.d(costs.x(i), m.states()[j]) < eps ? 1.0 : 0.0; };

  std::vector<double> g(s), tmp(s);
  for (std::size_t j = 0; j < s; ++j) g[j] = allowed(n0, j);
  for (long i = n0 - 1; i >= 0; --i) {
    for (std::size_t j = 0; j < s; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < s; ++k) acc += m.trans(j, k) * g[k];
      tmp[j] = allowed(i, j) * acc;
    }
    g.swap(tmp);
  }
  std::vector<double> h(s, 1.0);
  if (n0 >= 1) {
    for (std::size_t j = 0; j < s; ++j) h[j] = allowed(-n0, j);
    for (long i = -n0 + 1; i <= 0; ++i) {
      for (std::size_t j = 0; j < s; ++j) {
        double acc = 0.0;
        for (std::size_t c = 0; c < s; ++c) acc += m.trans(c, j) * h[c];
        tmp[j] = i < 0 ? allowed(i, j) * acc : acc;
      }
      h.swap(tmp);
    }
  }
  double total = 0.0;
  for (std::size_t j = 0; j < s; ++j) total += g[j] * h[j];
  return total / static_cast<double>(s);
}

// Mass of the cylinder of x on -n..n.
double agreement_mass(const MarkovMeasure& m, CostTable& costs, long n) {
  std::vector<Symbol> w;
  for (long i = -n; i <= n; ++i) w.push_back(costs.x(i));
  return cylinder_mass(ShiftMeasure{m}, CylinderWord(std::move(w)));
}

// Depth-first enumeration of the joint law of (y_{-n}..y_n). A branch is
// decided once its partial distance reaches eps (outside) or once even the
// worst-case tail keeps it below eps (inside); light branches are left
// undecided and widen the bracket.
BallMass markov_ball_mass(const MarkovMeasure& m, const SeqWindow& x, double eps, std::uint64_t seed,
                          const EstimatorOptions& opt) {
  CostTable costs(m, x);
  BallMass out;
  out.cylinder_upper = window_mass(m, costs, eps);
  out.cylinder_lower = agreement_mass(m, costs, inner_cutoff(eps));
  if (out.cylinder_upper == 0.0) return out;

  const double tau = opt.resolution * out.cylinder_upper;
  const std::size_t s = m.size();
  struct Node {
    long n;
    std::size_t f, b;
    double acc, mass;
  };
  std::vector<Node> stack;
  const double* root = costs.forward(0);
  for (std::size_t j = s; j-- > 0;) {
    const double c = std::min(1.0, root[j]);
    stack.push_back({0, j, j, c, 1.0 / static_cast<double>(s)});
  }

  // One sampled continuation of an undecided branch: 1 inside, 0 outside.
  Engine eng = make_engine(seed, kTagCompletion);
  const long depth_cap = std::min(opt.max_depth, opt.completion_depth);
  auto complete = [&](Node nd) {
    while (nd.n < depth_cap) {
      ++nd.n;
      nd.f = draw_index(eng, m.kernel().forward_row(nd.f));
      nd.b = draw_index(eng, m.kernel().backward_row(nd.b));
      nd.acc += costs.forward(nd.n)[nd.f] + costs.backward(nd.n)[nd.b];
      if (nd.acc >= eps) return 0.0;
      if (nd.acc + 2.0 * tail_upper(nd.n) < eps) return 1.0;
    }
    return 0.5;
  };

  double inside = 0.0, undecided = 0.0, sampled = 0.0;
  long nodes = 0;
  while (!stack.empty()) {
    const Node nd = stack.back();
    stack.pop_back();
    ++nodes;
    if (nd.acc >= eps) continue;
    if (nd.acc + 2.0 * tail_upper(nd.n) < eps) {
      inside += nd.mass;
      continue;
    }
    if (nd.mass < tau || nd.n >= opt.max_depth || nodes >= opt.max_nodes) {
      if (nodes >= opt.max_nodes) out.truncated = true;
      undecided += nd.mass;
      if (opt.completions > 0) {
        double hits = 0.0;
        for (long k = 0; k < opt.completions; ++k) hits += complete(nd);
        sampled += nd.mass * hits / static_cast<double>(opt.completions);
      }
      continue;
    }
    const long n1 = nd.n + 1;
    const double* fc = costs.forward(n1);
    const double* bc = costs.backward(n1);
    for (std::size_t b = s; b-- > 0;) {
      const double fa = nd.acc + fc[b];
      if (fa >= eps) continue;
      const double pf = nd.mass * m.trans(nd.f, b);
      for (std::size_t c = s; c-- > 0;) {
        const double a2 = fa + bc[c];
        if (a2 >= eps) continue;
        stack.push_back({n1, b, c, a2, pf * m.trans(c, nd.b)});
      }
    }
  }
  out.nodes = nodes;
  out.lower = std::max(inside, out.cylinder_lower);
  out.upper = std::min(inside + undecided, out.cylinder_upper);
  if (out.upper < out.lower) out.upper = out.lower;  // rounding only
  out.estimate = opt.completions > 0 ? std::clamp(inside + sampled, out.lower, out.upper) : 0.5 * (out.lower + out.upper);
  return out;
}

double power(double base, double e) { return e == 0.0 ? 1.0 : std::pow(base, e); }

}  // namespace

double markov_energy_closed_form(std::size_t s, double kappa, double q, long n) {
  check_markov_params(s, kappa, n);
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  const double sd = static_cast<double>(s);
  const double row = std::pow(sd - 1.0, 1.0 - q) * std::pow(kappa, q) + std::pow(1.0 - kappa, q);
  return std::pow(sd, 1.0 - q) * std::pow(row, static_cast<double>(2 * n));
}

double markov_log_energy_closed_form(std::size_t s, double kappa, long n) {
  check_markov_params(s, kappa, n);
  const double sd = static_cast<double>(s);
  const double h = -(1.0 - kappa) * std::log(1.0 - kappa) - kappa * std::log(kappa / (sd - 1.0));
  return -(std::log(sd) + static_cast<double>(2 * n) * h);
}

double cylinder_power_sum(const ShiftMeasure& m, double q, long n, std::size_t budget) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  double sum = 0.0;
  for_each_cylinder(m, n, budget, [&](std::span<const Symbol>, double p) { sum += std::pow(p, q); });
  return sum;
}

double windowed_energy_exact(const ShiftMeasure& m, double q, long n, std::size_t budget) {
  if (!(q > 1.0)) throw std::invalid_argument("windowed energy needs q > 1");
  return cylinder_power_sum(m, q, n, budget);
}

double cylinder_log_sum(const ShiftMeasure& m, long n, std::size_t budget) {
  double sum = 0.0;
  for_each_cylinder(m, n, budget, [&](std::span<const Symbol>, double p) { sum += xlogx(p); });
  return sum;
}

double renyi_value(std::span<const double> probs, double q) {
  if (!(q > 0.0)) throw std::invalid_argument("renyi order must be positive");
  if (q == 1.0) {
    double h = 0.0;
    for (double p : probs) h += xlogx(p);
    return h;
  }
  double sum = 0.0;
  for (double p : probs)
    if (p > 0.0) sum += std::pow(p, q);
  return std::log(sum) / (q - 1.0);
}

std::vector<std::pair<double, double>> renyi_profile(const ShiftMeasure& m, long n, std::span<const double> q_list,
                                                     std::size_t budget) {
  std::vector<double> probs;
  for_each_cylinder(m, n, budget, [&](std::span<const Symbol>, double p) { probs.push_back(p); });
  std::vector<std::pair<double, double>> out;
  for (double q : q_list) out.emplace_back(q, renyi_value(probs, q));
  return out;
}

BallMass ball_mass(const ShiftMeasure& m, const SeqWindow& x, double eps, std::uint64_t seed,
                   const EstimatorOptions& opt) {
  if (!(eps > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (!(x.alphabet_ptr() == alphabet_ptr_of(m) || x.alphabet() == alphabet_of(m)))
    throw std::invalid_argument("point and measure use different alphabets");
  if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) return periodic_ball_mass(*p, x, eps, opt.tol);
  return markov_ball_mass(std::get<MarkovMeasure>(m), x, eps, seed, opt);
}

namespace {

// Shared outer loop; f is the integrand as a function of the ball mass and is
// monotone, so the bracket maps to a bracket.
template <class F>
EstimateReport integrate(const ShiftMeasure& m, double eps, long n_outer, std::uint64_t seed,
                         const EstimatorOptions& opt, F&& f) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  auto bracket = [&](const BallMass& b) {
    const double a = f(b.lower), c = f(b.upper);
    return std::pair{std::min(a, c), std::max(a, c)};
  };
  if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < p->period(); ++j) {
      const auto [a, c] = bracket(periodic_ball_mass(*p, p->atom(j), eps, opt.tol));
      lo += a * p->atom_mass();
      hi += c * p->atom_mass();
    }
    EstimateReport r;
    r.value = 0.5 * (lo + hi);
    r.lower = lo;
    r.upper = hi;
    r.eps = eps;
    r.method = Method::exact_cylinder;
    r.n_samples = static_cast<long>(p->period());
    r.seed = seed;
    if (lo != hi) r.flag = "indeterminate_membership";
    return r;
  }

  if (n_outer < 100) throw std::invalid_argument("n_outer must be at least 100");
  const auto& mk = std::get<MarkovMeasure>(m);
  const auto count = static_cast<std::size_t>(n_outer);
  std::vector<double> lo(count), hi(count), val(count);
  std::vector<char> truncated(count, 0);
  parallel_for(count, opt.threads, [&](std::size_t i, unsigned) {
    const std::uint64_t point_seed = derive_seed(seed, kTagOuter, i);
    const SeqWindow x = sample_orbit(mk, 0, point_seed);
    const auto b = markov_ball_mass(mk, x, eps, point_seed, opt);
    std::tie(lo[i], hi[i]) = bracket(b);
    val[i] = f(b.estimate);
    truncated[i] = b.truncated;
  });
  const Stats st = mean_stats(val);
  EstimateReport r;
  r.value = st.mean;
  r.std_error = st.std_error;
  r.lower = mean_of(lo);
  r.upper = mean_of(hi);
  r.eps = eps;
  r.method = Method::monte_carlo;
  r.n_samples = n_outer;
  r.seed = seed;
  if (std::any_of(truncated.begin(), truncated.end(), [](char t) { return t != 0; })) r.flag = "node_cap";
  if (!std::isfinite(r.value)) r.flag = "zero_ball_mass";
  return r;
}

}  // namespace

EstimateReport energy_mc(const ShiftMeasure& m, double q, double eps, long n_outer, std::uint64_t seed,
                         const EstimatorOptions& opt) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  const double e = q - 1.0;
  return integrate(m, eps, n_outer, seed, opt, [e](double mass) { return power(mass, e); });
}

EstimateReport log_energy_mc(const ShiftMeasure& m, double eps, long n_outer, std::uint64_t seed,
                             const EstimatorOptions& opt) {
  return integrate(m, eps, n_outer, seed, opt, [](double mass) { return std::log(mass); });
}

SlopeSeries gfd_proxy(const ShiftMeasure& m, double q, const ScaleGrid& grid, long n_outer, std::uint64_t seed,
                      const EstimatorOptions& opt) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  SlopeSeries series;
  const bool markov = std::holds_alternative<MarkovMeasure>(m);
  const double sep = markov ? min_separation(m) : 0.0;
  for (double eps : grid.radii()) {
    SlopePoint pt;
    pt.eps = eps;
    if (markov && eps < sep) {
      // Below the state separation the energy is the cylinder sum at n0(eps).
      const auto& mk = std::get<MarkovMeasure>(m);
      const long n0 = window_cutoff(eps);
      pt.n = n0;
      const bool enumerable = support_cylinder_count(m, n0) <= static_cast<double>(opt.cylinder_budget);
      pt.method = enumerable ? Method::exact_cylinder : Method::closed_form;
      if (q == 1.0)
        pt.value = enumerable ? cylinder_log_sum(m, n0, opt.cylinder_budget)
                              : markov_log_energy_closed_form(mk.size(), mk.kappa(), n0);
      else
        pt.value = enumerable ? cylinder_power_sum(m, q, n0, opt.cylinder_budget)
                              : markov_energy_closed_form(mk.size(), mk.kappa(), q, n0);
    } else {
      const auto r = q == 1.0 ? log_energy_mc(m, eps, n_outer, seed, opt) : energy_mc(m, q, eps, n_outer, seed, opt);
      pt.value = r.value;
      pt.method = r.method;
      pt.std_error = r.std_error;
      pt.flag = r.flag;
    }
    const double denom = (q == 1.0 ? 1.0 : q - 1.0) * std::log(eps);
    pt.slope = (q == 1.0 ? pt.value : std::log(pt.value)) / denom;
    if (!std::isfinite(pt.slope)) pt.flag = q == 1.0 ? "zero_ball_mass" : "zero_energy";
    series.points.push_back(std::move(pt));
  }
  return series;
}

}  // namespace shiftdim
