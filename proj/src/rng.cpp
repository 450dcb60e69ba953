#include "mcb/rng.hpp"

namespace mcb {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master, StreamKind kind, std::uint64_t index) {
  const auto k = static_cast<std::uint64_t>(kind);
  return splitmix64(splitmix64(master) ^ splitmix64((k << 56) ^ splitmix64(index)));
}

}  // namespace mcb
