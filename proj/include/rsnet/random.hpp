#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rsnet {

/// Seeded random stream. One stream is owned by one simulation or generation
/// call and never shared between threads.
using Rng = std::mt19937_64;

/// Uniform draw on the closed interval [lo, hi]; a degenerate interval
/// returns `lo` without consuming randomness from the stream.
inline double uniform(Rng& rng, double lo, double hi) {
    if (lo == hi) return lo;
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng);
}

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable seed derived from a base seed and a list of coordinates. Independent
/// of evaluation order, so sweeps give the same seeds under any scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> coords) noexcept {
    std::uint64_t h = mix64(base);
    for (auto c : coords) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

}  // namespace rsnet
