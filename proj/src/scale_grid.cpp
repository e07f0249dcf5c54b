#include "shiftdim/scale_grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace shiftdim {

ScaleGrid::ScaleGrid(GridKind kind, std::vector<double> radii, long first_index)
    : kind_(kind), radii_(std::move(radii)), first_index_(first_index) {
  if (radii_.empty()) throw std::invalid_argument("scale grid is empty");
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    if (!(radii_[i] > 0.0 && radii_[i] < 1.0))
      throw std::invalid_argument(fmt::format("grid radius {} outside (0,1)", radii_[i]));
    if (i > 0 && !(radii_[i] < radii_[i - 1])) throw std::invalid_argument("grid radii must be strictly decreasing");
  }
}

ScaleGrid ScaleGrid::inverse_square(long k_first, long k_last) {
  if (k_first < 1 || k_last < k_first) throw std::invalid_argument("inverse_square grid needs 1 <= k_first <= k_last");
  std::vector<double> r;
  for (long k = k_first; k <= k_last; ++k) r.push_back(1.0 / (static_cast<double>(k) * static_cast<double>(k) + 1.0));
  return ScaleGrid(GridKind::inverse_square, std::move(r), k_first);
}

ScaleGrid ScaleGrid::dyadic(double start, long count) {
  if (count < 1) throw std::invalid_argument("dyadic grid needs count >= 1");
  std::vector<double> r;
  for (long j = 0; j < count; ++j) r.push_back(std::ldexp(start, static_cast<int>(-j)));
  return ScaleGrid(GridKind::dyadic, std::move(r));
}

ScaleGrid ScaleGrid::from_list(std::vector<double> radii) { return ScaleGrid(GridKind::list, std::move(radii)); }

GridKind parse_grid_kind(std::string_view s) {
  if (s == "dyadic") return GridKind::dyadic;
  if (s == "inverse_square") return GridKind::inverse_square;
  if (s == "list") return GridKind::list;
  throw std::invalid_argument(fmt::format("unknown grid kind '{}'", s));
}

std::string_view grid_kind_name(GridKind k) {
  switch (k) {
    case GridKind::dyadic: return "dyadic";
    case GridKind::inverse_square: return "inverse_square";
    case GridKind::list: return "list";
  }
  return "?";
}

}  // namespace shiftdim
