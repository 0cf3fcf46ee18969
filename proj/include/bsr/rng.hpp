#pragma once

#include <cstdint>
#include <random>

namespace bsr {

/// Generation purposes; each draws from its own derived stream.
enum class Stream : std::uint64_t {
  operator_matrix = 1,
  support = 2,
  values = 3,
  noise = 4,
  defect = 5,
  illumination = 6,
  misc = 7,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for (base seed, purpose, item index); independent across all three.
std::uint64_t derive_seed(std::uint64_t seed, Stream purpose, std::uint64_t index = 0);

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, Stream purpose, std::uint64_t index = 0) {
  return Rng(derive_seed(seed, purpose, index));
}

}  // namespace bsr
