#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mvqn/unity.hpp"

namespace mvqn {

/// Seeded generator used for every random choice in the library and CLI.
/// The raw mt19937_64 stream is mapped to doubles and shuffles by hand so
/// that identical seeds give identical results on every platform; the
/// standard distributions make no such promise.
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t below(std::uint64_t bound) { return bound > 1 ? engine() % bound : 0; }

    /// Random point on the unit circle.
    Complex unit_complex() { return std::polar(1.0, uniform(0.0, two_pi)); }

    /// Random complex number with both parts in [-half, half].
    Complex box_complex(double half) {
        double re = uniform(-half, half);
        double im = uniform(-half, half);
        return {re, im};
    }

    /// Fisher-Yates shuffle driven by this generator.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i)
            std::swap(values[i - 1], values[below(i)]);
    }
};

} // namespace mvqn
