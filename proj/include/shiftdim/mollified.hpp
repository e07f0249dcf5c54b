#pragma once

#include <cstdint>

#include "shiftdim/energy.hpp"

namespace shiftdim {

/// 1 on [0, eps], 2 - d/eps on [eps, 2 eps], 0 beyond.
double mollifier_kernel(double d, double eps);

/// f_eps(mu, x) = integral of the kernel at r(x, y) against mu(dy). Exact
/// (bracketed by distance bounds) for periodic measures, inner Monte Carlo
/// with opt.n_inner samples for Markov measures.
EstimateReport mollified_ball_mass(const ShiftMeasure& m, const SeqWindow& x, double eps, std::uint64_t seed,
                                   const EstimatorOptions& opt = {});

/// J(q, eps) = integral of f_eps(mu, x)^{q-1} dmu(x).
EstimateReport mollified_energy(const ShiftMeasure& m, double q, double eps, long n_outer, std::uint64_t seed,
                                const EstimatorOptions& opt = {});

}  // namespace shiftdim
