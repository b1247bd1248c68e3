#include "hmhd/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace hmhd {

Grid Grid::make(int dim, int n, int band_limit)
{
    return make(dim, {n, n, dim == 3 ? n : 1}, band_limit);
}

Grid Grid::make(int dim, std::array<int, 3> n, int band_limit, std::array<double, 3> length)
{
    Grid g;
    g.dim = dim;
    g.n = n;
    if (dim == 2) g.n[2] = 1;
    g.length = length;
    g.band_limit = band_limit < 0 ? g.max_band() : band_limit;
    g.validate();
    return g;
}

int Grid::max_band() const
{
    int m = n[0];
    for (int a = 1; a < dim; ++a) m = std::min(m, n[a]);
    return m / 2 - 1;
}

double Grid::volume() const
{
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= length[a];
    return v;
}

void Grid::validate() const
{
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("grid: dim must be 2 or 3, got " + std::to_string(dim));
    for (int a = 0; a < dim; ++a) {
        if (n[a] < 4 || n[a] % 2 != 0 || !is_power_of_two(n[a]))
            throw std::invalid_argument("grid: axis " + std::to_string(a + 1) +
                                        " size must be a power of two >= 4, got " +
                                        std::to_string(n[a]));
        if (!(length[a] > 0.0))
            throw std::invalid_argument("grid: non-positive period on axis " + std::to_string(a + 1));
    }
    if (dim == 2 && n[2] != 1) throw std::invalid_argument("grid: 2-D grid must have n3 = 1");
    if (band_limit < 0 || band_limit > max_band())
        throw std::invalid_argument("grid: band_limit " + std::to_string(band_limit) +
                                    " outside [0, " + std::to_string(max_band()) + "]");
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int next_power_of_two(int n)
{
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

int fft_size(int n)
{
    for (int m = std::max(n, 2);; ++m) {
        if (m % 2) continue;
        int r = m;
        for (int p : {2, 3, 5})
            while (r % p == 0) r /= p;
        if (r == 1) return m;
    }
}

}
