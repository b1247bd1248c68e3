#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace hmhd {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Periodic grid on [0, L1) x [0, L2) (x [0, L3)). A 2-D grid stores n[2] = 1.
struct Grid {
    int dim = 2;
    std::array<int, 3> n{4, 4, 1};
    std::array<double, 3> length{two_pi, two_pi, two_pi};
    int band_limit = 1;

    // band_limit < 0 selects the largest admissible value, min(n)/2 - 1.
    static Grid make(int dim, int n, int band_limit = -1);
    static Grid make(int dim, std::array<int, 3> n, int band_limit = -1,
                     std::array<double, 3> length = {two_pi, two_pi, two_pi});

    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;

    std::size_t size() const { return std::size_t(n[0]) * n[1] * n[2]; }
    int max_band() const;
    double volume() const;
    double wavenumber(int axis, int m) const { return two_pi / length[axis] * m; }
    std::size_t index(int i0, int i1, int i2) const
    {
        return (std::size_t(i0) * n[1] + i1) * n[2] + i2;
    }

    bool operator==(const Grid&) const = default;
};

// Signed frequency of storage index i on an axis of n points.
inline int signed_frequency(int i, int n) { return i <= n / 2 ? i : i - n; }
// Storage index of signed frequency m.
inline int lattice_index(int m, int n) { return ((m % n) + n) % n; }

bool is_power_of_two(int n);
int next_power_of_two(int n);
// Smallest even 2^a 3^b 5^c that is >= n.
int fft_size(int n);

}
