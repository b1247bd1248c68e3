#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "hmhd/spectral.hpp"

namespace hmhd {

enum class FieldKind { generic, velocity, magnetic, vorticity, current };

struct VectorField {
    std::array<SpectralScalar, 3> c;
    FieldKind kind = FieldKind::generic;

    VectorField() = default;
    explicit VectorField(const Grid& g, FieldKind k = FieldKind::generic);
    VectorField(SpectralScalar c1, SpectralScalar c2, SpectralScalar c3, FieldKind k = FieldKind::generic);

    const Grid& grid() const { return c[0].grid(); }
    SpectralScalar& operator[](int i) { return c[i]; }
    const SpectralScalar& operator[](int i) const { return c[i]; }
    bool is_zero() const;
    int effective_band() const;

    VectorField& operator+=(const VectorField& o);
    VectorField& operator-=(const VectorField& o);
    VectorField& operator*=(double s);
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator-(VectorField a);
VectorField operator*(double s, VectorField a);

// (f_h, f_v) = ((f1, f2, 0), (0, 0, f3)).
std::pair<VectorField, VectorField> split_hv(const VectorField& f);
SpectralScalar divergence(const VectorField& f);
VectorField curl(const VectorField& f);
VectorField current_density(const VectorField& b);
VectorField gradient(const SpectralScalar& f);
// On a 2-D grid the projection acts on (f1, f2) only.
VectorField leray_project(const VectorField& f);

double inner_product(const VectorField& f, const VectorField& g);
double l2_norm(const VectorField& f);
double sobolev_seminorm(const VectorField& f, double s);
double sobolev_norm(const VectorField& f, double s);
// ||grad f||_{L2}, summed over components.
double gradient_norm(const VectorField& f);
// ||div f|| / ||grad f|| (0 for constant fields).
double divergence_ratio(const VectorField& f);

VectorField apply_to_components(const VectorField& f, SpectralScalar (*op)(const SpectralScalar&));
VectorField partial_derivative(const VectorField& f, int axis);
VectorField laplacian(const VectorField& f);
VectorField resample(const VectorField& f, const Grid& target);
// f(lambda x) componentwise.
VectorField rescale(const VectorField& f, int lambda);
// Copies a 2-D field into a 3-D grid with n3 points as an x3-independent field.
VectorField embed_3d(const VectorField& f, int n3);

// Gaussian coefficients with amplitude |xi|^-slope on 1 <= |xi| <= band, no projection.
VectorField random_field(const Grid& g, std::uint64_t seed, int band, double slope = 2.0);
// Divergence-free variant; on 2-D grids (b1, b2) = (d2 psi, -d1 psi) and b3 is free.
VectorField random_divfree(const Grid& g, std::uint64_t seed, int band, double slope = 2.0);
SpectralScalar random_scalar(const Grid& g, std::uint64_t seed, int band, double slope = 2.0);

}
