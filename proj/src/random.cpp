#include "shiftdim/random.hpp"

namespace shiftdim {
namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(stream), hi32(stream), 0x5eedu};
  return Engine(seq);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(tag), hi32(tag), lo32(index), hi32(index)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

}  // namespace shiftdim
