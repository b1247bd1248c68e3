#include "hmhd/nonlinear.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "hmhd/log.hpp"

namespace hmhd {

std::vector<SpectralScalar> bilinear_sums(const std::vector<std::vector<BilinearTerm>>& sums, int out_band)
{
    const Grid* grid = nullptr;
    for (const auto& s : sums)
        for (const auto& t : s) {
            grid = &t.a->grid();
            break;
        }
    if (!grid) throw std::invalid_argument("bilinear_sums: no terms");
    const Grid& g = *grid;
    out_band = std::min(out_band, g.band_limit);

    std::map<const SpectralScalar*, int> band;
    auto band_of = [&](const SpectralScalar* f) {
        if (!(f->grid() == g)) throw std::invalid_argument("bilinear_sums: grid mismatch");
        auto it = band.find(f);
        if (it != band.end()) return it->second;
        int b = f->is_zero() ? -1 : f->effective_band();
        band.emplace(f, b);
        return b;
    };
    int total = 0, widest = 0;
    bool any = false;
    for (const auto& s : sums)
        for (const auto& t : s) {
            int ba = band_of(t.a), bb = band_of(t.b);
            if (ba < 0 || bb < 0 || t.coef == 0.0) continue;
            any = true;
            total = std::max(total, ba + bb);
            widest = std::max({widest, ba, bb});
        }
    std::vector<SpectralScalar> out;
    out.reserve(sums.size());
    if (!any) {
        for (std::size_t i = 0; i < sums.size(); ++i) out.emplace_back(g);
        return out;
    }
    out_band = std::min(out_band, total);
    Quadrature q = quadrature_for(g, product_points(total, out_band, widest));
    std::map<const SpectralScalar*, std::vector<double>> samples;
    auto samples_of = [&](const SpectralScalar* f) -> const std::vector<double>& {
        auto it = samples.find(f);
        if (it == samples.end()) it = samples.emplace(f, to_physical(*f, q)).first;
        return it->second;
    };
    std::vector<double> acc(q.size());
    for (const auto& s : sums) {
        std::fill(acc.begin(), acc.end(), 0.0);
        bool used = false;
        for (const auto& t : s) {
            if (band[t.a] < 0 || band[t.b] < 0 || t.coef == 0.0) continue;
            const auto& va = samples_of(t.a);
            const auto& vb = samples_of(t.b);
            for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += t.coef * va[p] * vb[p];
            used = true;
        }
        out.push_back(used ? from_physical(acc, q, g, out_band) : SpectralScalar(g));
    }
    return out;
}

namespace {

std::vector<std::vector<BilinearTerm>> cross_terms(const VectorField& a, const VectorField& b)
{
    return {{{1.0, &a[1], &b[2]}, {-1.0, &a[2], &b[1]}},
            {{1.0, &a[2], &b[0]}, {-1.0, &a[0], &b[2]}},
            {{1.0, &a[0], &b[1]}, {-1.0, &a[1], &b[0]}}};
}

}

VectorField cross_product_truncated(const VectorField& a, const VectorField& b)
{
    auto r = bilinear_sums(cross_terms(a, b), a.grid().band_limit);
    return VectorField(r[0], r[1], r[2]);
}

VectorField cross_product(const VectorField& a, const VectorField& b, const ProductOptions& opt)
{
    if (opt.truncate) return cross_product_truncated(a, b);
    int total = a.effective_band() + b.effective_band();
    const Grid& g = a.grid();
    if (total <= g.band_limit) return cross_product_truncated(a, b);
    if (!opt.allow_padding)
        throw std::domain_error("cross_product: exact result exceeds the grid band and padding is disabled");
    Grid lifted = lifted_grid(g, total);
    return cross_product_truncated(resample(a, lifted), resample(b, lifted));
}

VectorField hall_term(const VectorField& b)
{
    VectorField j = current_density(b);
    VectorField r = curl(cross_product_truncated(j, b));
    r.kind = FieldKind::generic;
    return r;
}

VectorField advect(const VectorField& u, const VectorField& f)
{
    const int dim = u.grid().dim;
    std::array<std::array<SpectralScalar, 3>, 3> df;
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < dim; ++k) df[c][k] = partial_derivative(f[c], k + 1);
    std::vector<std::vector<BilinearTerm>> sums(3);
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < dim; ++k) sums[c].push_back({1.0, &u[k], &df[c][k]});
    auto r = bilinear_sums(sums, u.grid().band_limit);
    return VectorField(r[0], r[1], r[2]);
}

SpectralScalar advect(const VectorField& u, const SpectralScalar& f)
{
    const int dim = u.grid().dim;
    std::array<SpectralScalar, 3> df;
    std::vector<std::vector<BilinearTerm>> sums(1);
    for (int k = 0; k < dim; ++k) {
        df[k] = partial_derivative(f, k + 1);
        sums[0].push_back({1.0, &u[k], &df[k]});
    }
    return bilinear_sums(sums, u.grid().band_limit)[0];
}

VectorField hall_term_alt(const VectorField& b)
{
    if (divergence_ratio(b) > 1e-10) warn("hall_term_alt: input is not divergence-free");
    return curl(advect(b, b));
}

VorticityResiduals vorticity_cancellation_residuals(const VectorField& u, const VectorField& b)
{
    if (u.grid().dim != 2 || b.grid().dim != 2)
        throw std::invalid_argument("vorticity_cancellation_residuals: requires a 2-D grid");
    auto one = [](const VectorField& f, double& scale) {
        VectorField w = curl(f);
        SpectralScalar d1 = partial_derivative(f[2], 1);
        SpectralScalar d2 = partial_derivative(f[2], 2);
        const ProductOptions exact{};
        SpectralScalar t1 = product(w[0], d1, exact);
        SpectralScalar t2 = product(w[1], d2, exact);
        scale = l2_norm(product(d1, d2, exact));
        return l2_norm(t1 + t2);
    };
    VorticityResiduals r{};
    r.omega_u3 = one(u, r.scale_u);
    r.j_b3 = one(b, r.scale_b);
    return r;
}

SpectralScalar omega3_rhs(const VectorField& u, const VectorField& b, double alpha, double nu)
{
    if (u.grid().dim != 2) throw std::invalid_argument("omega3_rhs: requires a 2-D grid");
    SpectralScalar w3 = partial_derivative(u[1], 1) - partial_derivative(u[0], 2);
    SpectralScalar r = -advect(u, w3) - nu * fractional_laplacian(w3, 2.0 * alpha);
    r += hall_term(b)[2];
    return r;
}

}
