#include "shiftdim/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace shiftdim {

Alphabet::Alphabet(std::vector<std::string> labels, std::vector<double> dist)
    : labels_(std::move(labels)), dist_(std::move(dist)) {
  const std::size_t n = labels_.size();
  if (n < 2) throw std::invalid_argument("alphabet needs at least 2 symbols");
  if (n > std::numeric_limits<Symbol>::max()) throw std::invalid_argument("alphabet too large");
  if (dist_.size() != n * n)
    throw std::invalid_argument(fmt::format("distance matrix has {} entries, expected {}", dist_.size(), n * n));

  double scale = 0.0;
  for (double v : dist_) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("distances must be finite and nonnegative");
    scale = std::max(scale, v);
  }
  const double slack = 1e-12 * std::max(1.0, scale);

  sep_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (dist_[i * n + i] != 0.0) throw std::invalid_argument(fmt::format("nonzero diagonal at {}", i));
    for (std::size_t j = 0; j < n; ++j) {
      if (dist_[i * n + j] != dist_[j * n + i])
        throw std::invalid_argument(fmt::format("distance matrix not symmetric at ({}, {})", i, j));
      if (i != j) sep_ = std::min(sep_, dist_[i * n + j]);
    }
  }
  if (!(sep_ > 0.0)) throw std::invalid_argument("distinct symbols must have positive distance");

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (dist_[i * n + k] > dist_[i * n + j] + dist_[j * n + k] + slack)
          throw std::invalid_argument(fmt::format("triangle inequality fails for ({}, {}, {})", i, j, k));

  diameter_ = scale;

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (labels_[i] == labels_[j]) throw std::invalid_argument(fmt::format("duplicate label '{}'", labels_[i]));
}

Alphabet Alphabet::equidistant(std::size_t count, double d) {
  std::vector<std::string> labels;
  std::vector<double> dist(count * count, d);
  for (std::size_t i = 0; i < count; ++i) {
    labels.push_back(std::to_string(i));
    dist[i * count + i] = 0.0;
  }
  return Alphabet(std::move(labels), std::move(dist));
}

Alphabet Alphabet::on_line(const std::vector<double>& positions) {
  const std::size_t n = positions.size();
  std::vector<std::string> labels;
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = std::abs(positions[i] - positions[j]);
  }
  return Alphabet(std::move(labels), std::move(dist));
}

Alphabet Alphabet::parse(std::istream& in) {
  std::stringstream body;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    body << line << '\n';
  }
  long long count = 0;
  if (!(body >> count) || count < 2) throw std::invalid_argument("alphabet file: bad symbol count");
  const auto n = static_cast<std::size_t>(count);
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n * n; ++i)
    if (!(body >> dist[i]))
      throw std::invalid_argument(fmt::format("alphabet file: expected {} distances, got {}", n * n, i));
  std::string extra;
  if (body >> extra) throw std::invalid_argument("alphabet file: trailing data after distance matrix");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Alphabet(std::move(labels), std::move(dist));
}

Alphabet Alphabet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open alphabet file '{}'", path.string()));
  return parse(in);
}

std::optional<Symbol> Alphabet::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<Symbol>(i);
  return std::nullopt;
}

Symbol Alphabet::symbol(std::string_view label) const {
  if (auto s = find(label)) return *s;
  throw std::invalid_argument(fmt::format("unknown symbol '{}'", label));
}

double Alphabet::separation_of(const std::vector<Symbol>& subset) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < subset.size(); ++i)
    for (std::size_t j = i + 1; j < subset.size(); ++j)
      if (subset[i] != subset[j]) best = std::min(best, d(subset[i], subset[j]));
  return best;
}

}  // namespace shiftdim
