#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hmhd/ledger.hpp"
#include "hmhd/nonlinear.hpp"
#include "oracles.hpp"

using namespace hmhd;

TEST_CASE("cross product matches the dense convolution")
{
    for (int dim : {2, 3}) {
        Grid g = Grid::make(dim, dim == 2 ? 16 : 8);
        auto a = random_field(g, 1, dim == 2 ? 5 : 3);
        auto b = random_field(g, 2, dim == 2 ? 5 : 3);
        auto exact = cross_product(a, b);
        auto ref = oracle::cross(oracle::spectrum(a), oracle::spectrum(b));
        double err = 0.0, scale = 0.0;
        for (const auto& [m, v] : ref)
            for (int c = 0; c < 3; ++c) {
                err = std::max(err, std::abs(exact[c].coeff(m) - v[c]));
                scale = std::max(scale, std::abs(v[c]));
            }
        CHECK(err <= 1e-14 * scale);

        auto t = cross_product_truncated(a, b);
        CHECK(t.grid() == g);
        double terr = 0.0;
        for (const auto& [m, v] : ref)
            if (std::abs(m[0]) <= g.band_limit && std::abs(m[1]) <= g.band_limit && std::abs(m[2]) <= g.band_limit)
                for (int c = 0; c < 3; ++c) terr = std::max(terr, std::abs(t[c].coeff(m) - v[c]));
        CHECK(terr <= 1e-14 * scale);
    }
}

TEST_CASE("Hall term is energy neutral and matches its advective form")
{
    for (int dim : {2, 3}) {
        Grid g = Grid::make(dim, dim == 2 ? 32 : 16);
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            auto b = random_divfree(g, seed, dim == 2 ? 7 : 3);
            auto h = hall_term(b);
            double scale = l2_norm(current_density(b)) * gradient_norm(b) * l2_norm(b);
            CHECK(std::abs(inner_product(h, b)) <= 1e-12 * scale);
            CHECK(l2_norm(h - hall_term_alt(b)) <= 1e-11 * l2_norm(h));

            // Non-solenoidal data keeps the energy neutrality.
            auto f = random_field(g, seed, dim == 2 ? 7 : 3);
            double fscale = l2_norm(current_density(f)) * gradient_norm(f) * l2_norm(f);
            CHECK(std::abs(inner_product(hall_term(f), f)) <= 1e-12 * fscale);
        }
    }
}

TEST_CASE("Hall term of a single shear mode vanishes")
{
    Grid g = Grid::make(2, 16);
    VectorField b(g);
    b[2].set_mode({1, 0, 0}, cplx(0.0, -0.5));
    CHECK(l2_norm(hall_term(b)) < 1e-15);
}

TEST_CASE("advection")
{
    Grid g = Grid::make(2, 16);
    auto u = random_divfree(g, 4, 4);
    auto f = random_scalar(g, 5, 4);
    auto a = advect(u, f);
    // (u . grad) f integrates against f to zero for solenoidal u.
    CHECK(std::abs(inner_product(a, f)) <= 1e-13 * l2_norm(a) * l2_norm(f));
    auto direct = product(u[0], partial_derivative(f, 1), {true, true, -1}) +
                  product(u[1], partial_derivative(f, 2), {true, true, -1});
    CHECK(l2_norm(a - direct) <= 1e-14 * l2_norm(a));
}

TEST_CASE("2-D vorticity cancellations")
{
    Grid g = Grid::make(2, 32);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto u = random_divfree(g, seed, 8);
        auto b = random_divfree(g, seed + 100, 8);
        auto r = vorticity_cancellation_residuals(u, b);
        CHECK(r.scale_u > 0.0);
        CHECK(r.omega_u3 <= 1e-13 * r.scale_u);
        CHECK(r.j_b3 <= 1e-13 * r.scale_b);
    }
    CHECK_THROWS_AS(vorticity_cancellation_residuals(random_divfree(Grid::make(3, 8), 1, 2),
                                                     random_divfree(Grid::make(3, 8), 2, 2)),
                    std::invalid_argument);
}
