#pragma once

#include <cstdint>
#include <random>

namespace moment_bounds {

// std::mt19937_64 output is fully specified by the standard, the library
// distributions are not; draw through these helpers so results match across
// standard library implementations.
class SeededRandom {
public:
    explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), rejection sampled.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound ? (~std::uint64_t{0} - (~std::uint64_t{0} % bound)) : 0;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace moment_bounds
