#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace mcb {

using Rng = std::mt19937_64;

enum class StreamKind : std::uint64_t {
  kEnvironment = 1,
  kPlayer = 2,
  kSchedule = 3,
  kArms = 4,
};

/// Counter-based split of a master seed: the seed of stream (kind, index) depends only on
/// those three values, so adding a player never shifts anyone else's randomness.
std::uint64_t stream_seed(std::uint64_t master, StreamKind kind, std::uint64_t index);

inline Rng make_stream(std::uint64_t master, StreamKind kind, std::uint64_t index) {
  return Rng(stream_seed(master, kind, index));
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace mcb
