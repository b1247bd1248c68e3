#pragma once

// Reference computations for the tests: direct Fourier sums and dense convolutions.
// Nothing here touches an FFT or a quadrature lattice.

#include <array>
#include <cmath>
#include <complex>
#include <map>

#include "hmhd/fields.hpp"

namespace oracle {

using hmhd::cplx;
using hmhd::Mode;
using Spectrum = std::map<Mode, cplx>;
using VecSpectrum = std::map<Mode, std::array<cplx, 3>>;

inline Spectrum spectrum(const hmhd::SpectralScalar& f)
{
    Spectrum s;
    const auto& g = f.grid();
    hmhd::for_each_mode(g, g.band_limit, [&](const Mode& m, std::size_t i) {
        if (f.coeffs()[i] != cplx(0.0)) s[m] = f.coeffs()[i];
    });
    return s;
}

inline VecSpectrum spectrum(const hmhd::VectorField& f)
{
    VecSpectrum s;
    for (int c = 0; c < 3; ++c)
        for (const auto& [m, v] : spectrum(f[c])) s[m][c] = v;
    return s;
}

inline std::array<double, 3> xi(const hmhd::Grid& g, const Mode& m)
{
    return {g.wavenumber(0, m[0]), g.wavenumber(1, m[1]), g.wavenumber(2, m[2])};
}

// f(x) as the direct sum over coefficients.
inline double evaluate(const hmhd::SpectralScalar& f, const std::array<double, 3>& x)
{
    double v = 0.0;
    for (const auto& [m, c] : spectrum(f)) {
        auto k = xi(f.grid(), m);
        v += (c * std::exp(cplx(0.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]))).real();
    }
    return v;
}

inline Spectrum convolve(const Spectrum& a, const Spectrum& b)
{
    Spectrum out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) out[{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]}] += ca * cb;
    return out;
}

// int a b over the domain, by Parseval.
inline double inner(const hmhd::Grid& g, const Spectrum& a, const Spectrum& b)
{
    cplx s = 0.0;
    for (const auto& [m, ca] : a) {
        auto it = b.find({-m[0], -m[1], -m[2]});
        if (it != b.end()) s += ca * it->second;
    }
    return g.volume() * s.real();
}

inline VecSpectrum curl(const hmhd::Grid& g, const VecSpectrum& f)
{
    VecSpectrum out;
    const cplx I(0.0, 1.0);
    for (const auto& [m, v] : f) {
        auto k = xi(g, m);
        out[m] = {I * (k[1] * v[2] - k[2] * v[1]), I * (k[2] * v[0] - k[0] * v[2]), I * (k[0] * v[1] - k[1] * v[0])};
    }
    return out;
}

inline Spectrum component(const VecSpectrum& f, int c)
{
    Spectrum s;
    for (const auto& [m, v] : f)
        if (v[c] != cplx(0.0)) s[m] = v[c];
    return s;
}

inline VecSpectrum cross(const VecSpectrum& a, const VecSpectrum& b)
{
    Spectrum a0 = component(a, 0), a1 = component(a, 1), a2 = component(a, 2);
    Spectrum b0 = component(b, 0), b1 = component(b, 1), b2 = component(b, 2);
    auto sub = [](Spectrum x, const Spectrum& y) {
        for (const auto& [m, v] : y) x[m] -= v;
        return x;
    };
    VecSpectrum out;
    const Spectrum c[3] = {sub(convolve(a1, b2), convolve(a2, b1)), sub(convolve(a2, b0), convolve(a0, b2)),
                           sub(convolve(a0, b1), convolve(a1, b0))};
    for (int i = 0; i < 3; ++i)
        for (const auto& [m, v] : c[i]) out[m][i] = v;
    return out;
}

// int Lap curl(j x b) . Lap b with j = curl b.
inline double pairing_h2(const hmhd::VectorField& b)
{
    const auto& g = b.grid();
    VecSpectrum bs = spectrum(b);
    VecSpectrum c = curl(g, cross(curl(g, bs), bs));
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        Spectrum ci = component(c, i), bi = component(bs, i);
        for (auto& [m, v] : ci) {
            auto k = xi(g, m);
            v *= k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        }
        for (auto& [m, v] : bi) {
            auto k = xi(g, m);
            v *= k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        }
        total += inner(g, ci, bi);
    }
    return total;
}

}
