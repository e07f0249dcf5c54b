#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace shiftdim {

enum class Method {
  exact_cylinder,
  closed_form,
  monte_carlo,
  greedy_cover,
  clique_count,
  exhaustive_net,
  return_time,
};

std::string_view method_tag(Method m);

struct EstimateReport {
  double value = 0.0;
  double std_error = 0.0;  // 0 for exact methods
  long n_samples = 0;
  std::uint64_t seed = 0;
  double eps = 0.0;
  Method method = Method::exact_cylinder;
  // Rigorous bracket around `value` where the method provides one; equal to
  // value when the method is exact.
  double lower = 0.0;
  double upper = 0.0;
  std::string flag;

  static EstimateReport exact(double v, double eps, Method m) {
    EstimateReport r;
    r.value = r.lower = r.upper = v;
    r.eps = eps;
    r.method = m;
    return r;
  }
};

struct SlopePoint {
  double eps = 0.0;
  double value = 0.0;  // the functional at this scale (energy, C_q, S, tau ...)
  double slope = 0.0;  // the log-quotient at this scale
  Method method = Method::exact_cylinder;
  double std_error = 0.0;
  long n = 0;          // window or orbit length used at this scale
  std::string flag;    // nonempty: excluded from lower()/upper()
};

struct SlopeSeries {
  std::vector<SlopePoint> points;

  /// min / max of the unflagged slopes; NaN if every scale is flagged.
  double lower() const;
  double upper() const;
  std::size_t usable() const;
};

/// One line of the experiment CSV.
struct CsvRow {
  std::string experiment;
  Method method = Method::exact_cylinder;
  double eps = 0.0;
  long n = 0;
  double q = 0.0;
  double value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::uint64_t seed = 0;
  std::string flag;
};

inline constexpr std::string_view kCsvHeader = "experiment,method,eps,n,q,value,stderr,n_samples,seed,flag";

/// Doubles are written with 17 significant digits so that output round-trips.
std::string format_csv_row(const CsvRow& row);
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

}  // namespace shiftdim
