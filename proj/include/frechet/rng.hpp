#pragma once

#include <cstdint>
#include <random>

namespace frechet {

// Seed derivation and bounded draws are spelled out here instead of using
// <random>'s distribution adaptors, whose output is implementation-defined.
// mt19937_64 itself is fully specified, so everything downstream of a seed
// is reproducible across platforms and across serial/parallel runs.

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

// Fixed splitting rule: stream k of a master seed. Trial i of a suite uses
// derive_seed(master, i), so a parallel runner can hand every trial its own
// generator without any shared state.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed + 0x9E3779B97F4A7C15ull * (stream + 1));
}

// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline long draw_int(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(draw_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Uniform in [0, 1) with 53 random bits.
inline double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace frechet
