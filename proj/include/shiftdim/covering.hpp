#pragma once

#include <span>
#include <string>
#include <vector>

#include "shiftdim/energy.hpp"

namespace shiftdim {

/// sup r(x, y) over the whole sequence space: sum_n min{w(n), diam M}
/// (returned as a rigorous upper bound).
double space_diameter(const Alphabet& alphabet);

/// Sum of mu(B(x_j, eps))^s over an explicit finite covering of the space,
/// hence an upper bound on S(s, eps). Candidates: eps-balls at every atom,
/// with the rest of the space covered by balls that hold no atom (0^s = 0),
/// or a single ball once eps exceeds the space diameter. Markov measures only
/// admit the single-ball covering.
EstimateReport covering_sum_greedy(const ShiftMeasure& m, double s, double eps, const EstimatorOptions& opt = {});

/// Same coverings with f_eps(mu, x_j)^s as the cost. The zero-mass complement
/// balls are not charged here; see README.
EstimateReport mollified_covering_sum(const ShiftMeasure& m, double s, double eps, const EstimatorOptions& opt = {});

/// Atoms first, then the remaining periodic points of period <= max_period
/// over the orbit symbols, at most `cap` in total.
std::vector<SeqWindow> candidate_net(const PeriodicOrbitMeasure& m, std::size_t max_period = 3,
                                     std::size_t cap = 200);

enum class CoverCost { ball_mass, mollified };

struct NetInfimum {
  double value = 0.0;
  std::vector<std::size_t> centres;  // indices into the net
  std::string flag;                  // nonempty if some membership was indeterminate
};

/// Minimum over subsets of `net` whose open eps-balls cover every atom of the
/// sum of cost(centre)^s, by dynamic programming over atom subsets.
NetInfimum exhaustive_net_infimum(const PeriodicOrbitMeasure& m, std::span<const SeqWindow> net, double s, double eps,
                                  CoverCost cost, const EstimatorOptions& opt = {});

}  // namespace shiftdim
