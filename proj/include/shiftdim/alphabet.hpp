#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shiftdim {

using Symbol = std::uint16_t;

/// Finite point set standing in for the compact alphabet M.
///
/// Symbols are dense indices 0..size()-1. The distance matrix is validated on
/// construction: symmetric, zero diagonal, triangle inequality on all triples,
/// strictly positive off-diagonal entries.
class Alphabet {
public:
  Alphabet(std::vector<std::string> labels, std::vector<double> dist);

  /// Every pair of distinct symbols at distance `d`; labels "0".."count-1".
  static Alphabet equidistant(std::size_t count, double d = 1.0);
  /// Points on the real line with |p_i - p_j| as the distance.
  static Alphabet on_line(const std::vector<double>& positions);

  /// Text format: symbol count, then the full distance matrix row by row.
  /// Lines starting with '#' are ignored. Labels are the row indices.
  static Alphabet parse(std::istream& in);
  static Alphabet load(const std::filesystem::path& path);

  std::size_t size() const { return labels_.size(); }
  double d(Symbol a, Symbol b) const { return dist_[a * labels_.size() + b]; }
  double separation() const { return sep_; }
  double diameter() const { return diameter_; }

  const std::string& label(Symbol s) const { return labels_.at(s); }
  std::optional<Symbol> find(std::string_view label) const;
  /// Throws std::invalid_argument for unknown labels.
  Symbol symbol(std::string_view label) const;

  /// Minimum pairwise distance within a subset of symbols.
  double separation_of(const std::vector<Symbol>& subset) const;

  bool operator==(const Alphabet& other) const = default;

private:
  std::vector<std::string> labels_;
  std::vector<double> dist_;
  double sep_ = 0.0;
  double diameter_ = 0.0;
};

}  // namespace shiftdim
