#pragma once

#include <cmath>
#include <cstdint>

namespace qimsim {

/// SplitMix64: tiny, fully specified generator so that seeded streams are
/// reproducible independent of the standard library implementation.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 significant bits.
    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, 2*pi).
    double uniform_angle() { return uniform01() * 6.283185307179586476925286766559; }

    /// Standard normal via Box-Muller (deterministic, stdlib-free).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }
};

/// Decorrelated sub-stream seed for (seed, index) pairs, e.g. one Monte
/// Carlo realization or one sweep sample.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ ((index + 1) * 0xD1B54A32D192ED03ull));
    return g.next();
}

}  // namespace qimsim
