#pragma once

// Coordinate weights of the sub-exponential sequence metric
//   r(x, y) = sum_n min{ 1/(n^2+1), d(x_n, y_n) }
// and the window geometry derived from them.

namespace shiftdim {

/// Weight cap 1/(n^2+1) of coordinate n (n may be negative).
inline double weight(long n) {
  const double m = static_cast<double>(n);
  return 1.0 / (m * m + 1.0);
}

/// Upper bound on the one-sided tail sum_{m > n} 1/(m^2+1), n >= 0.
double tail_upper(long n);
/// Lower bound on the same tail.
double tail_lower(long n);

/// Exact sum over all n in Z of 1/(n^2+1), i.e. pi*coth(pi).
double total_weight();

/// Unique n0 >= 0 with 1/((n0+1)^2+1) <= eps < 1/(n0^2+1). Requires 0 < eps < 1.
long window_cutoff(double eps);

/// Smallest n >= 0 with 2*tail_upper(n) < eps: agreeing on coordinates -n..n
/// puts a point strictly inside the eps-ball.
long inner_cutoff(double eps);

/// Smallest N with 2*tail_upper(N) <= tol. Throws if that exceeds max_walk_length().
long cutoff_for_tolerance(double tol);

/// Longest coordinate walk a non-periodic distance evaluation may take.
long max_walk_length();

}  // namespace shiftdim
