#pragma once

#include <string_view>
#include <vector>

namespace shiftdim {

enum class GridKind { dyadic, inverse_square, list };

/// Strictly decreasing radii in (0, 1).
class ScaleGrid {
public:
  /// eps_k = 1/(k^2+1) for k = k_first..k_last.
  static ScaleGrid inverse_square(long k_first, long k_last);
  /// eps_j = start * 2^-j for j = 0..count-1.
  static ScaleGrid dyadic(double start, long count);
  static ScaleGrid from_list(std::vector<double> radii);

  GridKind kind() const { return kind_; }
  const std::vector<double>& radii() const { return radii_; }
  std::size_t size() const { return radii_.size(); }
  double operator[](std::size_t i) const { return radii_[i]; }
  /// For inverse_square grids, the k of the first radius.
  long first_index() const { return first_index_; }

private:
  ScaleGrid(GridKind kind, std::vector<double> radii, long first_index = 0);
  GridKind kind_;
  std::vector<double> radii_;
  long first_index_;
};

GridKind parse_grid_kind(std::string_view s);
std::string_view grid_kind_name(GridKind k);

}  // namespace shiftdim
