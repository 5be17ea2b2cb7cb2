#pragma once

#include <cstdint>
#include <random>

namespace lnu::detail {

// Independent generator per (seed, stream id). Stream ids in use:
// 1 glorot init, 2 dropout, 11 sbm edges, 12 sbm features, 21 split, 31 edge drop.
inline std::mt19937_64 derived_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

}  // namespace lnu::detail
