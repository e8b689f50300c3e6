#pragma once

#include <cstdint>
#include <random>

namespace deltaq {

using Engine = std::mt19937_64;

// SplitMix64 finalizer (Steele, Lea, Flood).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of substream `index` under `master`. Counter-based: replication i
/// always sees the same stream no matter how many replications are run.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

inline Engine substream(std::uint64_t master, std::uint64_t index) {
    return Engine(substream_seed(master, index));
}

inline double uniform01(Engine& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace deltaq
