#ifndef BALLOAD_RNG_HPP
#define BALLOAD_RNG_HPP

#include <cstdint>
#include <random>

namespace balload {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed of substream `stream` of `seed`. Streams are addressed by content
// (replicate, chunk, sweep) rather than by worker, so results do not depend on
// how work is distributed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state = a ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(state);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub) {
  return derive_seed(derive_seed(seed, stream), sub);
}

inline Rng make_rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state)),
                    static_cast<std::uint32_t>(splitmix64(state))};
  return Rng(seq);
}

// BALANCED_LOADS_WORKERS if set to a positive integer, else 1.
int default_workers();

}  // namespace balload

#endif  // BALLOAD_RNG_HPP
