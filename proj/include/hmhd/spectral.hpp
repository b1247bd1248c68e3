#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hmhd/grid.hpp"

namespace hmhd {

using cplx = std::complex<double>;
using Mode = std::array<int, 3>;

// Real scalar field stored as Fourier coefficients, f(x) = sum_xi c_xi exp(i xi.x).
// Coefficients are laid out row-major over storage indices, axis 1 slowest.
class SpectralScalar {
public:
    SpectralScalar() = default;
    explicit SpectralScalar(const Grid& g);
    // Throws std::invalid_argument unless coeffs are Hermitian and band-limited.
    SpectralScalar(const Grid& g, std::vector<cplx> coeffs);

    const Grid& grid() const { return grid_; }
    const std::vector<cplx>& coeffs() const { return c_; }
    // Raw access for builders; callers keep the invariants.
    std::vector<cplx>& data() { return c_; }

    cplx coeff(const Mode& m) const;
    // Sets c(m) and c(-m) = conj(c(m)); the zero mode keeps only the real part.
    void set_mode(const Mode& m, cplx value);

    // Largest |m_axis| over nonzero coefficients (0 for constants and zero).
    int effective_band() const;
    bool is_zero() const;

    SpectralScalar& operator+=(const SpectralScalar& o);
    SpectralScalar& operator-=(const SpectralScalar& o);
    SpectralScalar& operator*=(double s);

private:
    Grid grid_{};
    std::vector<cplx> c_;
};

SpectralScalar operator+(SpectralScalar a, const SpectralScalar& b);
SpectralScalar operator-(SpectralScalar a, const SpectralScalar& b);
SpectralScalar operator-(SpectralScalar a);
SpectralScalar operator*(double s, SpectralScalar a);
SpectralScalar operator*(SpectralScalar a, double s);

// Calls fn(mode, storage index) for every mode with |m_axis| <= band.
template <class F>
void for_each_mode(const Grid& g, int band, F&& fn)
{
    const int b2 = g.dim == 3 ? band : 0;
    for (int m0 = -band; m0 <= band; ++m0)
        for (int m1 = -band; m1 <= band; ++m1)
            for (int m2 = -b2; m2 <= b2; ++m2)
                fn(Mode{m0, m1, m2}, g.index(lattice_index(m0, g.n[0]), lattice_index(m1, g.n[1]),
                                             lattice_index(m2, g.n[2])));
}

double wavenumber_norm2(const Grid& g, const Mode& m);

// Physical sampling lattice of m[0] x m[1] (x m[2]) points.
struct Quadrature {
    int dim = 2;
    std::array<int, 3> m{1, 1, 1};
    std::size_t size() const { return std::size_t(m[0]) * m[1] * m[2]; }
};

// FFT-friendly lattice with at least `points` points on every axis.
Quadrature quadrature_for(const Grid& g, int points);
Quadrature native_quadrature(const Grid& g);

std::vector<double> to_physical(const SpectralScalar& f, const Quadrature& q);
// Coefficients with |m_axis| <= out_band of the sampled function, placed on `target`.
SpectralScalar from_physical(std::span<const double> values, const Quadrature& q,
                             const Grid& target, int out_band);
std::vector<double> sample(const SpectralScalar& f);
SpectralScalar from_samples(const Grid& g, std::span<const double> values);

template <class F>
SpectralScalar from_function(const Grid& g, F&& fn)
{
    std::vector<double> v(g.size());
    for (int i0 = 0; i0 < g.n[0]; ++i0)
        for (int i1 = 0; i1 < g.n[1]; ++i1)
            for (int i2 = 0; i2 < g.n[2]; ++i2)
                v[g.index(i0, i1, i2)] = fn(g.length[0] * i0 / g.n[0], g.length[1] * i1 / g.n[1],
                                            g.dim == 3 ? g.length[2] * i2 / g.n[2] : 0.0);
    return from_samples(g, v);
}

// Axis is 1, 2 or 3; axis 3 on a 2-D grid gives the zero field.
SpectralScalar partial_derivative(const SpectralScalar& f, int axis);
// Mixed derivative with orders[a] derivatives along axis a+1.
SpectralScalar derivative(const SpectralScalar& f, const Mode& orders);
// Symbol |xi|^alpha with the zero mode mapped to 0. Throws std::domain_error for alpha < 0.
SpectralScalar fractional_laplacian(const SpectralScalar& f, double alpha);
SpectralScalar laplacian(const SpectralScalar& f);

double integral(const SpectralScalar& f);
// Integral of f g over the domain.
double inner_product(const SpectralScalar& f, const SpectralScalar& g);

struct ProductOptions {
    // Allow evaluation on a lattice finer than the grid, and a lifted result grid.
    bool allow_padding = true;
    // Keep the input grid and drop modes above min(out_band, band_limit).
    bool truncate = false;
    int out_band = -1;
};

// Exact (alias-free) coefficients of the pointwise product of fields sharing a grid.
SpectralScalar product(std::span<const SpectralScalar> fs, const ProductOptions& opt = {});
SpectralScalar product(const SpectralScalar& a, const SpectralScalar& b, const ProductOptions& opt = {});
// Exact integral of the pointwise product.
double integral_of_product(std::span<const SpectralScalar* const> fs);
double integral_of_product(const SpectralScalar& a, const SpectralScalar& b, const SpectralScalar& c);

// Lattice points per axis needed for exact coefficients up to out_band of a product of total
// band `total_band`, whose factors have band at most `max_factor_band`.
int product_points(int total_band, int out_band, int max_factor_band);
Grid lifted_grid(const Grid& g, int band);

double sobolev_seminorm(const SpectralScalar& f, double s);
// Inhomogeneous norm with weight (1 + |xi|^2)^s.
double sobolev_norm(const SpectralScalar& f, double s);
double l2_norm(const SpectralScalar& f);
// Quadrature approximation; p = infinity gives the max over lattice points.
double lp_norm(const SpectralScalar& f, double p);
double lp_norm_of_samples(std::span<const double> values, const Quadrature& q, const Grid& g, double p);
Quadrature lp_quadrature(const Grid& g, int band, double p);

// Copies the modes shared with `target` (same dim and period).
SpectralScalar resample(const SpectralScalar& f, const Grid& target);
// f(lambda x) for integer lambda; throws std::invalid_argument if lambda * band exceeds the grid band.
SpectralScalar rescale(const SpectralScalar& f, int lambda);

inline constexpr double infinity = std::numeric_limits<double>::infinity();

}
