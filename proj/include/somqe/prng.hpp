#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace somqe {

// The single random engine used everywhere (map init, sample draws, synth
// generators). mt19937_64 output is pinned by the C++ standard, so seeded
// runs reproduce bit-exactly across platforms. Golden tests freeze the
// derived draw sequences below; switching the engine or any mapping is a
// breaking change for every stored artifact.
using Rng = std::mt19937_64;

/// Unbiased integer draw in [0, n). Rejects raw values below the remainder
/// threshold instead of using std::uniform_int_distribution, whose mapping
/// is implementation-defined.
inline std::uint64_t draw_index(Rng& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("draw_index: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = rng();
        if (x >= threshold) return x % n;
    }
}

/// Uniform double in [0, 1), 53 random bits.
inline double draw_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; safe under log().
inline double draw_unit_pos(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

/// Standard normal deviate, Box-Muller. Consumes exactly two raw draws.
inline double draw_normal(Rng& rng) {
    const double u1 = draw_unit_pos(rng);
    const double u2 = draw_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace somqe
