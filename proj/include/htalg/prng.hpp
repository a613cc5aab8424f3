#pragma once

#include "htalg/rational.hpp"

#include <cstdint>

namespace htalg {

/// Splitmix64. Deterministic across platforms; std:: distributions are not,
/// and byte-stable output given a seed is part of the CLI contract.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [lo, hi], inclusive.
    long next_int(long lo, long hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next_u64() % span);
    }

    /// Uniform double in [lo, hi).
    double next_double(double lo, double hi) {
        double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    /// Small nonzero rational, numerator in [-num_max, num_max], denominator in [1, den_max].
    Rational next_rational(long num_max = 9, long den_max = 4) {
        long n = 0;
        while (n == 0) n = next_int(-num_max, num_max);
        return Rational(n, next_int(1, den_max));
    }

private:
    std::uint64_t state_;
};

}  // namespace htalg
