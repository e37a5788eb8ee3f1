#pragma once

#include <cstdint>
#include <random>

namespace rivalnet {

using Rng = std::mt19937_64;

/* SplitMix64 step. Used to derive independent, reproducible RNG streams
 * from a master seed: stream k of seed s is seeded from
 * splitmix64(s + (k+1) * golden). Consecutive master seeds therefore do
 * not produce overlapping streams. */
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Rng derive_rng(std::uint64_t master_seed, std::uint64_t stream) {
    std::uint64_t s = master_seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
    return Rng(splitmix64(s));
}

} // namespace rivalnet
