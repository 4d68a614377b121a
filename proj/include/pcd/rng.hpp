#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace pcd {

// Seeded random source with fixed, documented draw order. All distributions
// are implemented on top of the raw mt19937_64 stream (never the
// implementation-defined std::*_distribution adapters), so a given seed
// produces the same values on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1), 53-bit resolution. One engine draw.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi). One engine draw.
    double uniform(double lo, double hi) {
        return lo + uniform01() * (hi - lo);
    }

    // Standard normal via Box-Muller (cosine branch). Exactly two engine
    // draws per call.
    double normal(double mean, double sd) {
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform01();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi() * u2);
        return mean + sd * z;
    }

    // Uniform integer in [0, k). One engine draw. k must be >= 1.
    std::size_t uniform_index(std::size_t k) {
        const auto idx = static_cast<std::size_t>(uniform01() * static_cast<double>(k));
        return idx < k ? idx : k - 1;
    }

    // Fisher-Yates, high index downward. Exactly size()-1 engine draws.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static constexpr double two_pi() { return 6.283185307179586476925286766559; }

    std::mt19937_64 engine_;
};

}  // namespace pcd
