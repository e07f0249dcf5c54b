#pragma once
// Reference computations written without the library's own machinery. They
// are slow and only meant for small instances.

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

// sum_{n in Z} 1/(n^2+1) = pi coth(pi)
inline long double full_weight_sum() {
  const long double pi = std::numbers::pi_v<long double>;
  return pi / std::tanh(pi);
}

inline long double weight_prefix(long N) {
  long double s = 0.0L;
  for (long n = N; n >= 1; --n) s += 1.0L / (static_cast<long double>(n) * n + 1.0L);
  return s;
}

// Bracket on sum_{n>=1} 1/(n^2+1): partial sum up to N plus integral bounds on the rest.
inline std::pair<long double, long double> half_weight_bracket(long N) {
  const long double s = weight_prefix(N);
  const long double half_pi = std::numbers::pi_v<long double> / 2.0L;
  const long double lo = half_pi - std::atan(static_cast<long double>(N + 1));
  const long double hi = half_pi - std::atan(static_cast<long double>(N));
  return {s + lo, s + hi};
}

// Smallest n with 1/((n+1)^2+1) <= eps, by linear scan.
inline long scan_cutoff(double eps) {
  long n = 0;
  while (1.0 / ((n + 1.0) * (n + 1.0) + 1.0) > eps) ++n;
  return n;
}

// Smallest n with 2 * sum_{m>n} 1/(m^2+1) < eps, using the atan upper bound.
inline long inner_window(double eps) {
  long n = 0;
  while (2.0L * (std::numbers::pi_v<long double> / 2.0L - std::atan(static_cast<long double>(n))) >= eps) ++n;
  return n;
}

// Transition matrix of the perturbed cyclic chain, written out entry by entry.
inline std::vector<std::vector<double>> cyclic_matrix(int s, double kappa) {
  std::vector<std::vector<double>> p(s, std::vector<double>(s));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) p[i][j] = (j == (i + 1) % s) ? 1.0 - kappa : kappa / (s - 1);
  return p;
}

// Visits every word of length `len` over {0..s-1} with its Markov mass
// (uniform start), by plain recursion.
inline void markov_words(int s, double kappa, int len,
                         const std::function<void(const std::vector<int>&, long double)>& fn) {
  const auto p = cyclic_matrix(s, kappa);
  std::vector<int> w(len);
  std::function<void(int, long double)> rec = [&](int t, long double mass) {
    if (t == len) {
      fn(w, mass);
      return;
    }
    for (int a = 0; a < s; ++a) {
      w[t] = a;
      rec(t + 1, t == 0 ? 1.0L / s : mass * p[w[t - 1]][a]);
    }
  };
  rec(0, 1.0L);
}

inline long double markov_power_sum(int s, double kappa, double q, int n) {
  long double acc = 0.0L;
  markov_words(s, kappa, 2 * n + 1, [&](const std::vector<int>&, long double m) { acc += std::pow(m, (long double)q); });
  return acc;
}

inline long double markov_closed_form(int s, double kappa, double q, int n) {
  const long double base = std::pow((long double)(s - 1), 1.0L - q) * std::pow((long double)kappa, (long double)q) +
                           std::pow(1.0L - kappa, (long double)q);
  return std::pow((long double)s, 1.0L - q) * std::pow(base, 2.0L * n);
}

// sum_{m>=0} C(N,m) p^m (1-p)^(N-m) over m > k, summed from the far end.
inline long double binomial_upper_tail(long N, long double p, long k) {
  long double total = 0.0L;
  for (long m = k + 1; m <= N; ++m) {
    const long double logc = std::lgamma((long double)N + 1) - std::lgamma((long double)m + 1) -
                             std::lgamma((long double)(N - m) + 1);
    total += std::exp(logc + m * std::log(p) + (N - m) * std::log1p(-p));
  }
  return total;
}

// Ordered q-tuples over indices 0..n that are pairwise "close", brute force.
inline long brute_cliques(int n, int q, const std::function<bool(int, int)>& close) {
  std::vector<int> idx(q, 0);
  long count = 0;
  for (;;) {
    bool ok = true;
    for (int a = 0; a < q && ok; ++a)
      for (int b = a + 1; b < q && ok; ++b) ok = close(idx[a], idx[b]);
    count += ok;
    int t = q - 1;
    while (t >= 0 && idx[t] == n) idx[t--] = 0;
    if (t < 0) break;
    ++idx[t];
  }
  return count;
}

}  // namespace oracle
