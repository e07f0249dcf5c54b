#include "shiftdim/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace shiftdim {

std::string_view method_tag(Method m) {
  switch (m) {
    case Method::exact_cylinder: return "exact_cylinder";
    case Method::closed_form: return "closed_form";
    case Method::monte_carlo: return "monte_carlo";
    case Method::greedy_cover: return "greedy_cover";
    case Method::clique_count: return "clique_count";
    case Method::exhaustive_net: return "exhaustive_net";
    case Method::return_time: return "return_time";
  }
  return "unknown";
}

double SlopeSeries::lower() const {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : points)
    if (p.flag.empty() && !(best <= p.slope)) best = p.slope;
  return best;
}

double SlopeSeries::upper() const {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& p : points)
    if (p.flag.empty() && !(best >= p.slope)) best = p.slope;
  return best;
}

std::size_t SlopeSeries::usable() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return p.flag.empty(); }));
}

namespace {

// Flags and names never contain commas or quotes; keep them that way.
std::string clean(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

}  // namespace

std::string format_csv_row(const CsvRow& r) {
  return fmt::format("{},{},{:.17g},{},{:.17g},{:.17g},{:.17g},{},{},{}", clean(r.experiment), method_tag(r.method),
                     r.eps, r.n, r.q, r.value, r.std_error, r.n_samples, r.seed, clean(r.flag));
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << format_csv_row(r) << '\n';
}

}  // namespace shiftdim
