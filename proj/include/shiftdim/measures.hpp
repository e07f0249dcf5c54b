#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "shiftdim/alphabet.hpp"
#include "shiftdim/sequence.hpp"

namespace shiftdim {

/// Symbols a_{-n}..a_n of a cylinder [-n; a_{-n}, ..., a_n].
struct CylinderWord {
  long half_width = 0;
  std::vector<Symbol> symbols;

  CylinderWord() = default;
  explicit CylinderWord(std::vector<Symbol> syms);
  Symbol at(long i) const { return symbols[static_cast<std::size_t>(i + half_width)]; }
};

/// Uniform measure on the orbit of the periodic point x_i = word[i mod k].
/// The k symbols are pairwise distinct, so the k shifts are distinct atoms.
class PeriodicOrbitMeasure {
public:
  PeriodicOrbitMeasure(std::shared_ptr<const Alphabet> alphabet, std::vector<Symbol> word);

  std::size_t period() const { return word_.size(); }
  const std::vector<Symbol>& word() const { return word_; }
  const Alphabet& alphabet() const { return *alphabet_; }
  const std::shared_ptr<const Alphabet>& alphabet_ptr() const { return alphabet_; }

  /// T^j x for j = 0..k-1.
  SeqWindow atom(std::size_t j) const;
  std::vector<SeqWindow> atoms() const;
  double atom_mass() const { return 1.0 / static_cast<double>(word_.size()); }

private:
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<Symbol> word_;
};

/// Stationary Markov measure with p_{i,i+1} = p_{s,1} = 1-kappa and every
/// other transition kappa/(s-1).
class MarkovMeasure {
public:
  MarkovMeasure(std::shared_ptr<const Alphabet> alphabet, std::vector<Symbol> states, double kappa);

  std::size_t size() const { return states_.size(); }
  const std::vector<Symbol>& states() const { return states_; }
  double kappa() const { return kappa_; }
  double trans(std::size_t i, std::size_t j) const { return kernel_->forward(i, j); }
  const MarkovKernel& kernel() const { return *kernel_; }
  const std::shared_ptr<const MarkovKernel>& kernel_ptr() const { return kernel_; }
  const Alphabet& alphabet() const { return *alphabet_; }
  const std::shared_ptr<const Alphabet>& alphabet_ptr() const { return alphabet_; }

private:
  std::shared_ptr<const Alphabet> alphabet_;
  std::vector<Symbol> states_;
  double kappa_;
  std::shared_ptr<const MarkovKernel> kernel_;
};

using ShiftMeasure = std::variant<PeriodicOrbitMeasure, MarkovMeasure>;

/// Checks s == states.size(), distinct states, 0 < kappa < 1 and that the
/// resulting matrix is doubly stochastic.
MarkovMeasure build_markov(std::shared_ptr<const Alphabet> alphabet, std::size_t s, double kappa,
                           std::vector<Symbol> states);
/// States are the first s symbols of the alphabet.
MarkovMeasure build_markov(std::shared_ptr<const Alphabet> alphabet, std::size_t s, double kappa);

/// Largest deviation of any row or column sum from 1.
double stochasticity_defect(const MarkovMeasure& m);

double cylinder_mass(const ShiftMeasure& m, const CylinderWord& c);

/// Two-sided stationary sample: x_0 uniform, forward by the chain, backward by
/// its transpose. The window extends past half_len with the same streams, so
/// windows of different lengths from one seed are views of one sequence.
SeqWindow sample_orbit(const MarkovMeasure& m, long half_len, std::uint64_t seed);

double min_separation(const ShiftMeasure& m);

const Alphabet& alphabet_of(const ShiftMeasure& m);
const std::shared_ptr<const Alphabet>& alphabet_ptr_of(const ShiftMeasure& m);
/// Symbols carrying mass, in a fixed order.
std::vector<Symbol> support_symbols(const ShiftMeasure& m);

inline constexpr std::size_t kDefaultCylinderBudget = 1'000'000;

/// Number of cylinders of half-width n with positive mass.
double support_cylinder_count(const ShiftMeasure& m, long n);

/// Calls fn(word, mass) for every positive-mass cylinder of half-width n, in
/// lexicographic order. Throws BudgetExceeded if there are more than `budget`.
void for_each_cylinder(const ShiftMeasure& m, long n, std::size_t budget,
                       const std::function<void(std::span<const Symbol>, double)>& fn);

}  // namespace shiftdim
