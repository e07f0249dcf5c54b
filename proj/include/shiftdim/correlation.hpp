#pragma once

#include "shiftdim/energy.hpp"

namespace shiftdim {

struct CorrelationOptions {
  /// Pair decisions r <= eps whose distance bracket straddles eps after the
  /// walk reached this width are counted in `upper` only.
  double tol = 1e-9;
  unsigned threads = 1;
};

/// C_q(x, n, eps): ordered q-tuples from {0..n}^q whose orbit points
/// T^i x are pairwise within eps (closed), divided by n^q. value = lower
/// unless some pair was indeterminate.
EstimateReport correlation_sum(const SeqWindow& x, int q, long n, double eps, const CorrelationOptions& opt = {});

/// Per-scale log C_q / ((q-1) log eps). Scales with C_q = 0 are flagged.
SlopeSeries correlation_dimension_proxy(const SeqWindow& x, int q, long n, const ScaleGrid& grid,
                                        const CorrelationOptions& opt = {});

}  // namespace shiftdim
