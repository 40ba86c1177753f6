#include "nhminor/rng.hpp"

namespace nhminor {

std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t replica,
                           std::uint64_t attempt) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(master_seed), hi(master_seed), lo(replica),
                    hi(replica),     lo(attempt),     hi(attempt)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Engine engine_from_seed(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

Engine replica_engine(std::uint64_t master_seed, std::uint64_t replica, std::uint64_t attempt) {
  return engine_from_seed(replica_seed(master_seed, replica, attempt));
}

}  // namespace nhminor
