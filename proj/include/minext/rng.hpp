#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace minext {

// Counter-based SplitMix64 stream. The k-th output is a pure function of
// (seed, k), so a stream can be replayed or split without shared state and
// produces the same sequence on every platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    // Independent stream for one (cell, trial) unit of a sweep. Each index is
    // mixed before combining so that (cell, trial) and (trial, cell) collide
    // only by accident, not by construction.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial) {
        return mix(seed ^ mix(cell + 0x9E3779B97F4A7C15ULL) ^ mix(mix(trial + 0xBF58476D1CE4E5B9ULL)));
    }

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return mix(seed_ ^ counter_);
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_uniform();
    }

    // Standard normal via Box-Muller (cosine branch; two uniforms per draw).
    double next_normal() {
        double u1 = next_uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    // Chi-square with one degree of freedom: square of a standard normal.
    double next_chi2_1() {
        const double z = next_normal();
        return z * z;
    }

    // Uniform integer in [0, bound) by rejection (no modulo bias).
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % bound;
    }

    int next_sign() { return (next_u64() & 1u) ? 1 : -1; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace minext
