#pragma once

#include <cstdint>
#include <random>

namespace sqzlat {

// splitmix64 finalizer. Used as a seed mixer so that structured inputs
// (master seed, group index, realization index) land on uncorrelated streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(splitmix64(seed) ^ tag);
}

// Uniform double in [0, 1) with exactly 53 random bits. Hand-rolled instead of
// std::uniform_real_distribution, whose stream is implementation-defined; the
// test suite freezes sampled values, so the mapping must be stable.
inline double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform double on [center - width/2, center + width/2].
inline double uniform_about(std::mt19937_64& eng, double center, double width) {
    return center + width * (uniform01(eng) - 0.5);
}

} // namespace sqzlat
