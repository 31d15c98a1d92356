#ifndef FBLEARN_RNG_HPP
#define FBLEARN_RNG_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace fblearn {

// Counter-based generator: every variate is a pure function of
// (seed, stream, counter), so sampling is reproducible and independent of
// evaluation order or thread count.
namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix64(mix64(seed ^ 0x632be59bd9b4e019ULL * stream) + counter);
}

/// Uniform double in [0, 1).
inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(bits(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). bound >= 1.
inline std::uint64_t uniform_index(std::uint64_t seed, std::uint64_t stream,
                                   std::uint64_t counter, std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits(seed, stream, counter)) * bound) >> 64);
}

/// Sample an index from a finite pmf by inverse-CDF walk.
/// Masses need not be exactly normalized; the last index absorbs the slack.
inline std::size_t categorical(std::span<const double> mass, std::uint64_t seed,
                               std::uint64_t stream, std::uint64_t counter) {
    double u = uniform(seed, stream, counter);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < mass.size(); ++i) {
        acc += mass[i];
        if (u < acc) return i;
    }
    return mass.size() - 1;
}

// Stream ids used across the library, kept distinct so different purposes
// never share a counter sequence.
enum Stream : std::uint64_t {
    kTrainingInput = 1,
    kTrainingOutput = 2,
    kCodebookSymbol = 3,
    kSimMessage = 4,
    kSimNoise = 5,
    kMcFallback = 6,
    kDrawDerive = 7,
    kTieBreak = 8,
};

}  // namespace rng
}  // namespace fblearn

#endif
