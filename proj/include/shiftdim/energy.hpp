#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shiftdim/measures.hpp"
#include "shiftdim/report.hpp"
#include "shiftdim/scale_grid.hpp"

namespace shiftdim {

/// Knobs shared by the estimators. Defaults are what the experiments use.
struct EstimatorOptions {
  std::size_t cylinder_budget = kDefaultCylinderBudget;
  /// Membership decisions whose distance bracket is narrower than this and
  /// still straddles the radius are reported as indeterminate.
  double tol = 1e-9;
  /// Ball-mass enumeration stops refining a branch once its mass falls below
  /// resolution * (window bound on the ball mass).
  double resolution = 1e-2;
  long max_nodes = 200'000;
  long max_depth = 100'000;
  long n_inner = 1000;
  /// Random continuations drawn for each branch the enumeration leaves undecided.
  long completions = 1;
  /// A continuation still undecided at this depth counts as half inside; its
  /// distance is then known to within 2*tail(depth).
  long completion_depth = 512;
  unsigned threads = 1;
};

/// s^{1-q} ((s-1)^{1-q} kappa^q + (1-kappa)^q)^{2n}: the sum of q-th powers of
/// the masses of all cylinders of half-width n.
double markov_energy_closed_form(std::size_t s, double kappa, double q, long n);
/// sum over cylinders of p log p, i.e. -(log s + 2n h) with h the entropy rate.
double markov_log_energy_closed_form(std::size_t s, double kappa, long n);

/// sum_C mu(C)^q over cylinders of half-width n; this is the energy of
/// mu at every radius below min_separation. Requires q > 1.
double windowed_energy_exact(const ShiftMeasure& m, double q, long n, std::size_t budget = kDefaultCylinderBudget);
/// Same sum for any q > 0.
double cylinder_power_sum(const ShiftMeasure& m, double q, long n, std::size_t budget = kDefaultCylinderBudget);
/// sum_C mu(C) log mu(C).
double cylinder_log_sum(const ShiftMeasure& m, long n, std::size_t budget = kDefaultCylinderBudget);

/// log(sum p^q)/(q-1) for a probability vector, and sum p log p at q = 1.
double renyi_value(std::span<const double> probs, double q);
/// (q, renyi_value of the half-width-n cylinder distribution) for each q.
std::vector<std::pair<double, double>> renyi_profile(const ShiftMeasure& m, long n, std::span<const double> q_list,
                                                     std::size_t budget = kDefaultCylinderBudget);

/// Rigorous bracket on mu(B(x, eps)) in the sequence metric (open ball),
/// plus an unbiased estimate that resolves the undecided part by sampling.
struct BallMass {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
  /// Cylinder bounds: mass of the agreement cylinder that sits inside the
  /// ball, and mass of the coordinate window that contains it.
  double cylinder_lower = 0.0;
  double cylinder_upper = 0.0;
  long nodes = 0;
  bool truncated = false;  // node cap reached
};

/// `seed` drives the continuation sampling only; the bracket is deterministic.
BallMass ball_mass(const ShiftMeasure& m, const SeqWindow& x, double eps, std::uint64_t seed,
                   const EstimatorOptions& opt = {});

/// Energy integral of mu(B(x,eps))^{q-1}. Exact over the atoms for periodic
/// measures; otherwise outer Monte Carlo over sampled points using the
/// ball_mass() estimate per point. lower/upper average the per-point brackets.
EstimateReport energy_mc(const ShiftMeasure& m, double q, double eps, long n_outer, std::uint64_t seed,
                         const EstimatorOptions& opt = {});
/// Integral of log mu(B(x,eps)), the q = 1 integrand.
EstimateReport log_energy_mc(const ShiftMeasure& m, double eps, long n_outer, std::uint64_t seed,
                             const EstimatorOptions& opt = {});

/// Per-scale quotients log I(q,eps)/((q-1) log eps), or E[log mu(B)]/log eps at q = 1.
SlopeSeries gfd_proxy(const ShiftMeasure& m, double q, const ScaleGrid& grid, long n_outer, std::uint64_t seed,
                      const EstimatorOptions& opt = {});

}  // namespace shiftdim
