#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hmhd {

// Counter-based generator: draw i of stream `seed` is splitmix64_mix(seed + (i + 1) * golden).
class CounterRng {
public:
    static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    static std::uint64_t mix(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t at(std::uint64_t counter) const { return mix(seed_ + (counter + 1) * golden); }

    std::uint64_t next() { return at(counter_++); }

    // Uniform on (0, 1]: (top 53 bits + 1) * 2^-53.
    double uniform() { return double((next() >> 11) + 1) * 0x1.0p-53; }

    // Box-Muller, cosine branch only: two uniforms per normal.
    double normal()
    {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}
