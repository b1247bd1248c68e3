#include "hmhd/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hmhd/rng.hpp"

namespace hmhd {

VectorField::VectorField(const Grid& g, FieldKind k) : c{SpectralScalar(g), SpectralScalar(g), SpectralScalar(g)}, kind(k)
{
}

VectorField::VectorField(SpectralScalar c1, SpectralScalar c2, SpectralScalar c3, FieldKind k)
    : c{std::move(c1), std::move(c2), std::move(c3)}, kind(k)
{
    if (!(c[0].grid() == c[1].grid()) || !(c[0].grid() == c[2].grid()))
        throw std::invalid_argument("VectorField: components on different grids");
}

bool VectorField::is_zero() const { return c[0].is_zero() && c[1].is_zero() && c[2].is_zero(); }

int VectorField::effective_band() const
{
    return std::max({c[0].effective_band(), c[1].effective_band(), c[2].effective_band()});
}

VectorField& VectorField::operator+=(const VectorField& o)
{
    for (int i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
}

VectorField& VectorField::operator-=(const VectorField& o)
{
    for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
}

VectorField& VectorField::operator*=(double s)
{
    for (auto& x : c) x *= s;
    return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator-(VectorField a) { return a *= -1.0; }
VectorField operator*(double s, VectorField a) { return a *= s; }

std::pair<VectorField, VectorField> split_hv(const VectorField& f)
{
    SpectralScalar zero(f.grid());
    return {VectorField(f[0], f[1], zero, f.kind), VectorField(zero, zero, f[2], f.kind)};
}

SpectralScalar divergence(const VectorField& f)
{
    return partial_derivative(f[0], 1) + partial_derivative(f[1], 2) + partial_derivative(f[2], 3);
}

VectorField curl(const VectorField& f)
{
    auto d = [&](int comp, int axis) { return partial_derivative(f[comp - 1], axis); };
    return VectorField(d(3, 2) - d(2, 3), -d(3, 1) + d(1, 3), d(2, 1) - d(1, 2));
}

VectorField current_density(const VectorField& b)
{
    VectorField j = curl(b);
    j.kind = FieldKind::current;
    return j;
}

VectorField gradient(const SpectralScalar& f)
{
    return VectorField(partial_derivative(f, 1), partial_derivative(f, 2), partial_derivative(f, 3));
}

VectorField leray_project(const VectorField& f)
{
    const Grid& g = f.grid();
    const int nc = g.dim;
    VectorField r = f;
    for_each_mode(g, g.band_limit, [&](const Mode& m, std::size_t idx) {
        double xi[3] = {g.wavenumber(0, m[0]), g.wavenumber(1, m[1]), g.dim == 3 ? g.wavenumber(2, m[2]) : 0.0};
        double k2 = 0.0;
        cplx dot(0.0, 0.0);
        for (int a = 0; a < nc; ++a) {
            k2 += xi[a] * xi[a];
            dot += xi[a] * f[a].coeffs()[idx];
        }
        if (k2 == 0.0) return;
        for (int a = 0; a < nc; ++a) r[a].data()[idx] = f[a].coeffs()[idx] - xi[a] * dot / k2;
    });
    return r;
}

double inner_product(const VectorField& f, const VectorField& g)
{
    return inner_product(f[0], g[0]) + inner_product(f[1], g[1]) + inner_product(f[2], g[2]);
}

double sobolev_seminorm(const VectorField& f, double s)
{
    double acc = 0.0;
    for (const auto& x : f.c) {
        double v = sobolev_seminorm(x, s);
        acc += v * v;
    }
    return std::sqrt(acc);
}

double sobolev_norm(const VectorField& f, double s)
{
    double acc = 0.0;
    for (const auto& x : f.c) {
        double v = sobolev_norm(x, s);
        acc += v * v;
    }
    return std::sqrt(acc);
}

double l2_norm(const VectorField& f) { return sobolev_seminorm(f, 0.0); }

double gradient_norm(const VectorField& f) { return sobolev_seminorm(f, 1.0); }

double divergence_ratio(const VectorField& f)
{
    double grad = gradient_norm(f);
    return grad == 0.0 ? 0.0 : l2_norm(divergence(f)) / grad;
}

VectorField apply_to_components(const VectorField& f, SpectralScalar (*op)(const SpectralScalar&))
{
    return VectorField(op(f[0]), op(f[1]), op(f[2]), f.kind);
}

VectorField partial_derivative(const VectorField& f, int axis)
{
    return VectorField(partial_derivative(f[0], axis), partial_derivative(f[1], axis),
                       partial_derivative(f[2], axis));
}

VectorField laplacian(const VectorField& f) { return apply_to_components(f, &laplacian); }

VectorField resample(const VectorField& f, const Grid& target)
{
    return VectorField(resample(f[0], target), resample(f[1], target), resample(f[2], target), f.kind);
}

VectorField rescale(const VectorField& f, int lambda)
{
    return VectorField(rescale(f[0], lambda), rescale(f[1], lambda), rescale(f[2], lambda), f.kind);
}

VectorField embed_3d(const VectorField& f, int n3)
{
    const Grid& g = f.grid();
    if (g.dim != 2) throw std::invalid_argument("embed_3d: input must live on a 2-D grid");
    Grid g3 = Grid::make(3, {g.n[0], g.n[1], n3}, g.band_limit, {g.length[0], g.length[1], two_pi});
    VectorField r(g3, f.kind);
    for (int c = 0; c < 3; ++c)
        for_each_mode(g, g.band_limit, [&](const Mode& m, std::size_t idx) {
            r[c].data()[g3.index(lattice_index(m[0], g3.n[0]), lattice_index(m[1], g3.n[1]), 0)] =
                f[c].coeffs()[idx];
        });
    return r;
}

namespace {

// Fills `ncomp` scalars with Gaussian coefficients of amplitude |xi|^-slope. Modes are visited in
// lexicographic order of (m1, m2, m3) over [-band, band], keeping one representative of each +-xi
// pair (first nonzero frequency from the last axis positive) with 1 <= |xi| <= band. Each visited
// mode draws, per component, a real and an imaginary normal; the coefficient is
// |xi|^-slope (re + i im) / sqrt(2).
std::vector<SpectralScalar> gaussian_components(const Grid& g, std::uint64_t seed, int band, double slope,
                                                int ncomp)
{
    if (band < 0 || band > g.band_limit)
        throw std::invalid_argument("random field: band must lie in [0, band_limit]");
    CounterRng rng(seed);
    std::vector<SpectralScalar> out(ncomp, SpectralScalar(g));
    const int b2 = g.dim == 3 ? band : 0;
    for (int m0 = -band; m0 <= band; ++m0)
        for (int m1 = -band; m1 <= band; ++m1)
            for (int m2 = -b2; m2 <= b2; ++m2) {
                Mode m{m0, m1, m2};
                bool positive = m2 > 0 || (m2 == 0 && (m1 > 0 || (m1 == 0 && m0 > 0)));
                if (!positive) continue;
                double k = std::sqrt(wavenumber_norm2(g, m));
                if (k < 1.0 || k > band) continue;
                double amp = std::pow(k, -slope) / std::sqrt(2.0);
                for (int c = 0; c < ncomp; ++c) {
                    double re = rng.normal();
                    double im = rng.normal();
                    out[c].set_mode(m, amp * cplx(re, im));
                }
            }
    return out;
}

}

SpectralScalar random_scalar(const Grid& g, std::uint64_t seed, int band, double slope)
{
    return gaussian_components(g, seed, band, slope, 1)[0];
}

VectorField random_field(const Grid& g, std::uint64_t seed, int band, double slope)
{
    auto c = gaussian_components(g, seed, band, slope, 3);
    return VectorField(c[0], c[1], c[2]);
}

VectorField random_divfree(const Grid& g, std::uint64_t seed, int band, double slope)
{
    if (g.dim == 3) {
        VectorField f = leray_project(random_field(g, seed, band, slope));
        f.kind = FieldKind::magnetic;
        return f;
    }
    // psi carries one extra power so that (b1, b2) has the requested spectrum.
    auto c = gaussian_components(g, seed, band, slope + 1.0, 2);
    SpectralScalar b3 = c[1];
    for_each_mode(g, band, [&](const Mode& m, std::size_t idx) {
        double k = std::sqrt(wavenumber_norm2(g, m));
        if (k > 0.0) b3.data()[idx] *= k;
    });
    return VectorField(partial_derivative(c[0], 2), -partial_derivative(c[0], 1), b3, FieldKind::magnetic);
}

}
