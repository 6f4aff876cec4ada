#ifndef ARSK_RANDOM_HPP
#define ARSK_RANDOM_HPP

#include <cstdint>
#include <random>

namespace arsk {

using Rng = std::mt19937_64;

// Stream tags used when deriving child seeds; one per purpose so that, e.g.,
// permutation streams never collide with k-means restart streams.
enum class SeedTag : std::uint64_t {
    KMeansRestart = 1,
    OuterIteration = 2,
    Permutation = 3,
    Means = 4,
    Covariance = 5,
    Observations = 6,
    Replicate = 7,
    Method = 8,
    Scenario = 9,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic child seed for (seed, tag, index).
inline std::uint64_t derive_seed(std::uint64_t seed, SeedTag tag, std::uint64_t index = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
    return splitmix64(h ^ index);
}

inline Rng make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Rng(seq);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace arsk

#endif  // ARSK_RANDOM_HPP
