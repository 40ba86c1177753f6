#pragma once

#include <cstdint>
#include <random>

namespace nhminor {

using Engine = std::mt19937_64;

// Independent stream for one replica. The attempt counter gives fresh streams when a
// replica has to be resampled.
Engine replica_engine(std::uint64_t master_seed, std::uint64_t replica, std::uint64_t attempt = 0);

Engine engine_from_seed(std::uint64_t seed);

// 64-bit seed identifying the stream, recorded with each sample.
std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t replica,
                           std::uint64_t attempt = 0);

}  // namespace nhminor
