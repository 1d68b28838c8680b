#ifndef NETRECON_RANDOM_H_
#define NETRECON_RANDOM_H_

#include <cstdint>
#include <random>

namespace netrecon {

using Rng = std::mt19937_64;

// Counter-based seed splitting. DeriveSeed(master, k) is a bijective mix of
// (master, k); streams for different k are statistically independent and
// each can be regenerated without touching the others.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream);

inline Rng MakeRng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

// Named streams used by the experiment seed schedule.
enum class SeedStream : std::uint64_t {
  kGraph = 1,
  kDynamics = 2,
  kPinch = 3,
  kMatrix = 4,
  kSignal = 5,
};

inline std::uint64_t DeriveSeed(std::uint64_t master, SeedStream stream) {
  return DeriveSeed(master, static_cast<std::uint64_t>(stream));
}

}  // namespace netrecon

#endif  // NETRECON_RANDOM_H_
