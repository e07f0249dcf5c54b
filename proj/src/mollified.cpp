#include "shiftdim/mollified.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "shiftdim/parallel.hpp"
#include "shiftdim/random.hpp"

namespace shiftdim {
namespace {

constexpr std::uint64_t kTagOuter = 0x6d6f6c6f;  // "molo"
constexpr std::uint64_t kTagInner = 0x6d6f6c69;  // "moli"

// Kernel value bracket for a distance bracket; the kernel is nonincreasing.
std::pair<double, double> kernel_bracket(const DistanceBounds& b, double eps) {
  return {mollifier_kernel(b.upper, eps), mollifier_kernel(b.lower, eps)};
}

DistanceBounds bounds_for_kernel(const SeqWindow& x, const SeqWindow& y, double eps, double tol) {
  if (x.same_point(y)) return {0.0, 0.0};
  Trajectory tx(x), ty(y);
  const PointRef u{&tx, 0}, v{&ty, 0};
  // The kernel is flat below eps and above 2 eps; only the shell needs the full tolerance.
  const auto b = bound_distance(x.alphabet(), u, v,
                                WalkTarget{.tol = tol, .threshold = eps, .ball = Ball::closed, .cap = 2.0 * eps});
  if (b.upper <= eps || b.lower >= 2.0 * eps || b.upper - b.lower <= tol) return b;
  return bound_distance(x.alphabet(), u, v, WalkTarget{.tol = tol, .cap = 2.0 * eps});
}

struct Mean {
  double value, std_error;
};

Mean mean_and_error(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0};
}

}  // namespace

double mollifier_kernel(double d, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("mollifier radius must be positive");
  if (d <= eps) return 1.0;
  if (d >= 2.0 * eps) return 0.0;
  return 2.0 - d / eps;
}

EstimateReport mollified_ball_mass(const ShiftMeasure& m, const SeqWindow& x, double eps, std::uint64_t seed,
                                   const EstimatorOptions& opt) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < p->period(); ++j) {
      const auto [a, c] = kernel_bracket(bounds_for_kernel(p->atom(j), x, eps, opt.tol), eps);
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
    return r;
  }
  const auto& mk = std::get<MarkovMeasure>(m);
  if (opt.n_inner < 1) throw std::invalid_argument("n_inner must be positive");
  // Random tails make tight tolerances expensive; the kernel is 1/eps-Lipschitz,
  // so a tolerance relative to eps bounds the per-sample kernel error.
  const double tol = std::max(opt.tol, 1e-4 * eps);
  std::vector<double> lo(opt.n_inner), hi(opt.n_inner), mid(opt.n_inner);
  for (long j = 0; j < opt.n_inner; ++j) {
    const SeqWindow y = sample_orbit(mk, 0, derive_seed(seed, kTagInner, static_cast<std::uint64_t>(j)));
    std::tie(lo[j], hi[j]) = kernel_bracket(bounds_for_kernel(x, y, eps, tol), eps);
    mid[j] = 0.5 * (lo[j] + hi[j]);
  }
  const Mean mm = mean_and_error(mid);
  EstimateReport r;
  r.value = mm.value;
  r.std_error = mm.std_error;
  r.lower = mean_and_error(lo).value;
  r.upper = mean_and_error(hi).value;
  r.eps = eps;
  r.method = Method::monte_carlo;
  r.n_samples = opt.n_inner;
  r.seed = seed;
  return r;
}

EstimateReport mollified_energy(const ShiftMeasure& m, double q, double eps, long n_outer, std::uint64_t seed,
                                const EstimatorOptions& opt) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  const double e = q - 1.0;
  auto integrand = [e](double f) { return e == 0.0 ? 1.0 : std::pow(f, e); };
  if (const auto* p = std::get_if<PeriodicOrbitMeasure>(&m)) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < p->period(); ++j) {
      const auto f = mollified_ball_mass(m, p->atom(j), eps, seed, opt);
      const double a = integrand(f.lower), c = integrand(f.upper);
      lo += std::min(a, c) * p->atom_mass();
      hi += std::max(a, c) * p->atom_mass();
    }
    EstimateReport r;
    r.value = 0.5 * (lo + hi);
    r.lower = lo;
    r.upper = hi;
    r.eps = eps;
    r.method = Method::exact_cylinder;
    r.n_samples = static_cast<long>(p->period());
    r.seed = seed;
    return r;
  }
  if (n_outer < 100) throw std::invalid_argument("n_outer must be at least 100");
  const auto& mk = std::get<MarkovMeasure>(m);
  const auto count = static_cast<std::size_t>(n_outer);
  std::vector<double> lo(count), hi(count), val(count);
  parallel_for(count, opt.threads, [&](std::size_t i, unsigned) {
    const std::uint64_t point_seed = derive_seed(seed, kTagOuter, i);
    const SeqWindow x = sample_orbit(mk, 0, point_seed);
    const auto f = mollified_ball_mass(m, x, eps, point_seed, opt);
    const double a = integrand(f.lower), c = integrand(f.upper);
    lo[i] = std::min(a, c);
    hi[i] = std::max(a, c);
    val[i] = integrand(f.value);
  });
  const Mean mm = mean_and_error(val);
  EstimateReport r;
  r.value = mm.value;
  r.std_error = mm.std_error;
  r.lower = mean_and_error(lo).value;
  r.upper = mean_and_error(hi).value;
  r.eps = eps;
  r.method = Method::monte_carlo;
  r.n_samples = n_outer;
  r.seed = seed;
  return r;
}

}  // namespace shiftdim
