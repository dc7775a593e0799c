#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace isc3 {

// All randomness in the library flows through one seeded mt19937_64 per run.
// The draw helpers below map engine output to ranges without going through
// std::uniform_*_distribution, whose output is implementation-defined; this
// keeps generated instances and solver runs byte-reproducible across
// standard libraries.
using Rng = std::mt19937_64;

// Unbiased integer in [0, n). n must be > 0.
inline std::uint64_t uniform_u64(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

// Inclusive integer range.
inline int uniform_int(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(uniform_u64(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

// Uniform double in [0, 1) with 53 bits of precision.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

// Fisher-Yates; std::shuffle is implementation-defined in its draws.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_u64(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace isc3
