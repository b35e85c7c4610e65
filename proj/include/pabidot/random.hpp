#pragma once

#include <cstdint>
#include <random>

namespace pabidot {

using Rng = std::mt19937_64;

// Independent pipeline stages each draw from their own stream of one root seed.
enum class Stream : std::uint32_t {
    translation = 1,
    expansion = 2,
    shuffle = 3,
    attack = 4,
    folds = 5,
    synthetic = 6,
};

Rng derive_stream(std::uint64_t root_seed, Stream stream);

} // namespace pabidot
