#pragma once

#include <cstdint>
#include <random>

namespace spindet::rng {

// One SplitMix64 step (Vigna's public-domain mixer). Full 64-bit avalanche,
// so nearby inputs map to statistically unrelated outputs.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based substream derivation: the seed for (master, a, b) depends only
// on the tuple, not on how many streams were drawn before it. Monte-Carlo
// trials seeded this way are reproducible under any execution order.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a,
                                       std::uint64_t b = 0) noexcept {
  std::uint64_t s = master;
  std::uint64_t z = splitmix64(s);
  s = z ^ (a * 0xd1342543de82ef95ULL);
  z = splitmix64(s);
  s = z ^ (b * 0xaf251af3b0f025b5ULL);
  return splitmix64(s);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

}  // namespace spindet::rng
