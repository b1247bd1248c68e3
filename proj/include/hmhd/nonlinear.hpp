#pragma once

#include <vector>

#include "hmhd/fields.hpp"

namespace hmhd {

struct BilinearTerm {
    double coef;
    const SpectralScalar* a;
    const SpectralScalar* b;
};

// Exact coefficients of each sum of products, truncated to out_band on the shared grid.
// All sums share one sampling lattice, and each distinct input is sampled once.
std::vector<SpectralScalar> bilinear_sums(const std::vector<std::vector<BilinearTerm>>& sums, int out_band);

// Exact cross product on a lifted grid when the grid band is too small.
VectorField cross_product(const VectorField& a, const VectorField& b, const ProductOptions& opt = {});
// Cross product truncated to the grid band.
VectorField cross_product_truncated(const VectorField& a, const VectorField& b);

// curl(j x b) with j = curl b, dealiased to the grid band.
VectorField hall_term(const VectorField& b);
// curl((b . grad) b).
VectorField hall_term_alt(const VectorField& b);
// (u . grad) f componentwise, dealiased.
VectorField advect(const VectorField& u, const VectorField& f);
SpectralScalar advect(const VectorField& u, const SpectralScalar& f);

struct VorticityResiduals {
    double omega_u3;  // ||(omega . grad) u3||
    double j_b3;      // ||(j . grad) b3||
    double scale_u;   // ||d1 u3 d2 u3||
    double scale_b;   // ||d1 b3 d2 b3||
};

// 2-D grids only; throws std::invalid_argument otherwise.
VorticityResiduals vorticity_cancellation_residuals(const VectorField& u, const VectorField& b);

// -(u . grad) w3 - nu (-Laplacian)^alpha w3 + [curl(j x b)]_3 with w3 = d1 u2 - d2 u1; the last
// term is the curl of the Lorentz force (b . grad) b.
SpectralScalar omega3_rhs(const VectorField& u, const VectorField& b, double alpha, double nu = 1.0);

}
