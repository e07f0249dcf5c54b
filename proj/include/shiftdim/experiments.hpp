#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "shiftdim/config.hpp"
#include "shiftdim/measures.hpp"
#include "shiftdim/report.hpp"
#include "shiftdim/scale_grid.hpp"

namespace shiftdim {

struct PlotCurve {
  std::string name;  // file stem, [a-z0-9_.-]
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
};

struct ExperimentResult {
  std::string name;
  std::vector<CsvRow> rows;
  std::vector<PlotCurve> curves;
  bool pass = false;
  std::vector<std::string> summary;  // human-readable lines
};

/// `alphabet` key: equidistant:N[:d] | line:p0,p1,... | file:PATH.
/// Without the key, an equidistant unit alphabet with `min_size` symbols.
std::shared_ptr<const Alphabet> build_alphabet(const Config& cfg, std::size_t min_size);
ShiftMeasure build_measure(const Config& cfg);
ScaleGrid build_grid(const Config& cfg, GridKind default_kind);

ExperimentResult run_pesin(const Config& cfg, unsigned threads = 1);
ExperimentResult run_divergence(const Config& cfg, unsigned threads = 1);
ExperimentResult run_periodic_lower(const Config& cfg, unsigned threads = 1);
ExperimentResult run_sandwich(const Config& cfg, unsigned threads = 1);
ExperimentResult run_recurrence(const Config& cfg, unsigned threads = 1);
/// Dispatches on the `experiment` key.
ExperimentResult run_experiment(const Config& cfg, unsigned threads = 1);

/// <dir>/<name>.csv, <dir>/plot/<curve>.dat and <dir>/plot/manifest.txt.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace shiftdim
