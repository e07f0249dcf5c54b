#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace shiftdim {

using Engine = std::mt19937_64;

/// Engine for an independent stream keyed by (seed, stream).
Engine make_engine(std::uint64_t seed, std::uint64_t stream);

/// Child seed for sample `index` of purpose `tag`; stable across runs and platforms.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

/// Uniform double in [0, 1) built from the top 53 bits, so draws do not depend
/// on the standard library's distribution implementation.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

/// Index drawn from a probability row (sums to 1 up to rounding).
inline std::size_t draw_index(Engine& eng, std::span<const double> probs) {
  const double u = uniform01(eng);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return probs.size() - 1;
}

}  // namespace shiftdim
