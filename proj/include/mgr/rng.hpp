#pragma once

#include <cstdint>
#include <random>

namespace mgr {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic per-trial seed from (base seed, sample size, trial index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t n, std::uint64_t trial) {
    return splitmix64(splitmix64(splitmix64(base) ^ n) ^ trial);
}

/// Uniform double in [0, 1) from the engine's top 53 bits; portable across
/// standard library implementations, unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace mgr
