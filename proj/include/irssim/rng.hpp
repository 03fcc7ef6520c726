#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace irssim {

// All randomness flows through Rng, a thin wrapper around mt19937_64.
// Monte-Carlo loops derive one independent stream per trial via
// trial_seed(base, index) so results do not depend on how trials are
// scheduled, only on the trial index.

inline std::uint64_t mix64(std::uint64_t z) {
    // SplitMix64 finalizer
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t stream_index) {
    return mix64(base_seed + (stream_index + 1) * 0x9E3779B97F4A7C15ULL);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
    }
    double uniform_angle() {
        return std::uniform_real_distribution<double>(0.0, 2.0 * 3.14159265358979323846)(gen_);
    }
    double normal() { return normal_(gen_); }

    // CN(0,1): independent real/imag parts with variance 1/2
    std::complex<double> cgauss() {
        const double re = normal_(gen_);
        const double im = normal_(gen_);
        return {re * 0.7071067811865476, im * 0.7071067811865476};
    }

    std::uint64_t next_u64() { return gen_(); }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace irssim
