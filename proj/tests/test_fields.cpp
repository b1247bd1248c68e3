#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hmhd/fields.hpp"
#include "hmhd/rng.hpp"
#include "oracles.hpp"

using namespace hmhd;

TEST_CASE("counter generator matches the reference splitmix64 stream")
{
    // First outputs of splitmix64 seeded with 0.
    CounterRng r(0);
    CHECK(r.next() == 0xE220A8397B1DCDAFULL);
    CHECK(r.next() == 0x6E789E6AA1B965F4ULL);
    CHECK(r.next() == 0x06C45D188009454FULL);
    CounterRng a(42), b(42);
    a.next();
    CHECK(a.next() == b.at(1));
}

TEST_CASE("random fields are reproducible and respect the band")
{
    Grid g = Grid::make(3, 16);
    auto a = random_field(g, 5, 4);
    auto b = random_field(g, 5, 4);
    auto c = random_field(g, 6, 4);
    for (int i = 0; i < 3; ++i) CHECK(a[i].coeffs() == b[i].coeffs());
    CHECK(l2_norm(a - c) > 0.0);
    for (const auto& [m, v] : oracle::spectrum(a)) {
        double k2 = wavenumber_norm2(g, m);
        CHECK(k2 >= 1.0);
        CHECK(k2 <= 16.0);
    }
}

TEST_CASE("solenoidal fields")
{
    for (int dim : {2, 3}) {
        Grid g = Grid::make(dim, 16);
        auto b = random_divfree(g, 8, 5);
        CHECK(divergence_ratio(b) < 1e-14);
        CHECK(divergence_ratio(random_field(g, 8, 5)) > 1e-2);
        auto p = leray_project(random_field(g, 9, 5));
        CHECK(divergence_ratio(p) < 1e-14);
        CHECK(l2_norm(leray_project(p) - p) <= 1e-14 * l2_norm(p));
        CHECK(l2_norm(leray_project(b) - b) <= 1e-14 * l2_norm(b));
    }
}

TEST_CASE("vector calculus identities")
{
    Grid g = Grid::make(3, 16);
    auto phi = random_scalar(g, 4, 5);
    auto b = random_field(g, 3, 5);
    CHECK(l2_norm(curl(gradient(phi))) <= 1e-13 * l2_norm(gradient(phi)));
    CHECK(l2_norm(divergence(curl(b))) <= 1e-13 * l2_norm(curl(b)));
    // curl curl b = grad div b - Lap b
    auto lhs = curl(curl(b));
    auto rhs = gradient(divergence(b)) - laplacian(b);
    CHECK(l2_norm(lhs - rhs) <= 1e-13 * l2_norm(lhs));

    auto j = current_density(b);
    auto ref = oracle::curl(g, oracle::spectrum(b));
    double err = 0.0;
    for (const auto& [m, v] : ref)
        for (int c = 0; c < 3; ++c) err = std::max(err, std::abs(j[c].coeff(m) - v[c]));
    CHECK(err < 1e-13);
}

TEST_CASE("2-D fields have no x3 dependence and embed into 3-D")
{
    Grid g = Grid::make(2, 16);
    auto b = random_divfree(g, 2, 4);
    CHECK(partial_derivative(b, 3).is_zero());
    auto e = embed_3d(b, 16);
    CHECK(e.grid().dim == 3);
    CHECK(std::abs(l2_norm(e) - std::sqrt(two_pi) * l2_norm(b)) <= 1e-13 * l2_norm(e));
    CHECK(divergence_ratio(e) < 1e-14);
    auto [h, v] = split_hv(b);
    CHECK(h[2].is_zero());
    CHECK(v[0].is_zero());
    CHECK(l2_norm(h + v - b) == 0.0);
}
