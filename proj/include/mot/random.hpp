#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mot {

/// Seeded RNG with hand-rolled distributions so that output is identical
/// across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    /// Derive a decorrelated stream id, e.g. per tuning run or per purpose.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed ^ (stream * 0x9E3779B97F4A7C15ull + 0xBF58476D1CE4E5B9ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double normal(double mean = 0.0, double stddev = 1.0) {
        // Box-Muller; draws two uniforms per call.
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586476925286766559 * u2);
    }

    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        // Inversion by sequential search; fine for the small rates used here.
        const double u = uniform();
        double p = std::exp(-lambda);
        double cdf = p;
        int k = 0;
        while (u > cdf && k < 10000) {
            ++k;
            p *= lambda / k;
            cdf += p;
        }
        return k;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace mot
