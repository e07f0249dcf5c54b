#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shiftdim/scale_grid.hpp"
#include "shiftdim/sequence.hpp"

namespace shiftdim {

struct ReturnRecord {
  double radius = 0.0;
  std::optional<long> tau;  // empty: no return within the horizon
  long horizon = 0;
  /// "indeterminate": r(T^tau x, x) could not be separated from the radius;
  /// tau then holds the first undecided k.
  std::string flag;
};

/// Smallest k in [1, horizon] with r(T^k x, x) < radius.
ReturnRecord return_time(const SeqWindow& x, double radius, long horizon, double tol = 1e-9);

struct RecurrenceRates {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<ReturnRecord> records;
  std::vector<double> quotients;  // log tau / (-log radius); NaN where flagged
};

/// Quotients over the grid; throws if no scale produced a usable return time.
RecurrenceRates recurrence_rates(const SeqWindow& x, const ScaleGrid& grid, long horizon, double tol = 1e-9,
                                 unsigned threads = 1);

}  // namespace shiftdim
