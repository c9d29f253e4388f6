#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace reebsim {

// All randomness in the pipeline flows through this wrapper so that results
// are reproducible from a 64-bit seed across platforms. std::mt19937_64's
// output sequence is fixed by the standard; the standard *distributions* are
// not, so sampling is done by hand here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n >= 1. Rejection sampling keeps it unbiased.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller (one value per call; the pair's second
    // half is discarded to keep the draw count predictable).
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 engine_;
};

// splitmix64 step; used to derive independent child seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives a child seed from (seed, label), e.g. one stream per agent.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);

} // namespace reebsim
