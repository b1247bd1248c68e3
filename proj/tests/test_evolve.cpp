#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hmhd/evolve.hpp"
#include "hmhd/log.hpp"

using namespace hmhd;
using Catch::Matchers::WithinRel;

namespace {

VectorField sin_mode(const Grid& g, int component, int axis)
{
    VectorField b(g, FieldKind::magnetic);
    Mode m{0, 0, 0};
    m[axis] = 1;
    b[component].set_mode(m, cplx(0.0, -0.5));
    return b;
}

SimState random_state(const ModelSpec& spec, const Grid& g, std::uint64_t seed, int band)
{
    SimState s;
    s.b = random_divfree(g, seed, band);
    s.b *= 1.0 / sobolev_norm(s.b, 3.0);
    if (spec.has_velocity()) {
        s.u = random_divfree(g, seed + 1, band);
        *s.u *= 1.0 / sobolev_norm(*s.u, 3.0);
    }
    return s;
}

double distance(const SimState& a, const SimState& b)
{
    double d = l2_norm(a.b - b.b);
    if (a.u) d = std::hypot(d, l2_norm(*a.u - *b.u));
    return d;
}

}

TEST_CASE("single shear modes decay like exp(-t)")
{
    Grid g = Grid::make(2, 16);
    ModelSpec spec;
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    for (auto [comp, axis] : {std::pair{2, 0}, std::pair{0, 1}}) {
        SimState s;
        s.b = sin_mode(g, comp, axis);
        auto res = simulate(spec, s, cfg);
        REQUIRE_FALSE(res.blew_up);
        CHECK_THAT(res.state.t, WithinRel(1.0, 1e-14));
        CHECK(l2_norm(res.state.b - std::exp(-1.0) * s.b) <= 1e-13 * l2_norm(s.b));
    }
}

TEST_CASE("nonlinear terms conserve energy")
{
    Grid g = Grid::make(2, 32);
    for (System sys : {System::electron_aniso, System::electron_general, System::hallmhd_mixed,
                       System::hallmhd_classical}) {
        ModelSpec spec;
        spec.system = sys;
        SimState s = random_state(spec, g, 3, 8);
        Rhs r = rhs(spec, s);
        double power = inner_product(r.db, s.b);
        double scale = l2_norm(r.db) * l2_norm(s.b);
        if (r.du) {
            power += inner_product(*r.du, *s.u);
            scale += l2_norm(*r.du) * l2_norm(*s.u);
        }
        CHECK(std::abs(power) <= 1e-12 * scale);
        CHECK(divergence_ratio(r.db) < 1e-12);
        if (r.du) CHECK(divergence_ratio(*r.du) < 1e-12);
    }
}

TEST_CASE("dissipation rate matches the diffusion symbols")
{
    Grid g = Grid::make(2, 16);
    ModelSpec spec;
    spec.eta = 0.5;
    VectorField b = sin_mode(g, 0, 1) + 2.0 * sin_mode(g, 2, 0);
    b[2].set_mode({2, 0, 0}, cplx(0.0, -0.5));
    // eta (||Lambda^{3/2} b1||^2 + ||Lambda^{alpha} b3||^2); |sin x|^2 integrates to 2 pi^2.
    const double pi2 = 2 * std::pow(std::numbers::pi, 2);
    double expected = 0.5 * (pi2 + 4 * pi2 + std::pow(2.0, 2 * spec.alpha) * pi2);
    CHECK_THAT(dissipation_rate(spec, b, std::nullopt), WithinRel(expected, 1e-13));
}

TEST_CASE("zero data and the mean mode are preserved")
{
    Grid g = Grid::make(2, 16);
    ModelSpec spec;
    spec.system = System::hallmhd_mixed;
    StepperConfig cfg;
    cfg.t_end = 0.05;
    SimState zero;
    zero.b = VectorField(g);
    zero.u = VectorField(g);
    auto z = simulate(spec, zero, cfg);
    CHECK(z.state.b.is_zero());
    CHECK(z.state.u->is_zero());

    SimState s = random_state(spec, g, 5, 5);
    s.b[2].set_mode({0, 0, 0}, cplx(0.3, 0.0));
    auto r = simulate(spec, s, cfg);
    CHECK(std::abs(r.state.b[2].coeff({0, 0, 0}).real() - 0.3) < 1e-15);
}

TEST_CASE("time steppers converge at their order")
{
    Grid g = Grid::make(2, 32);
    for (System sys : {System::electron_aniso, System::hallmhd_mixed}) {
        ModelSpec spec;
        spec.system = sys;
        SimState s0 = random_state(spec, g, 7, 4);
        for (auto [scheme, order] : {std::pair{Scheme::if_rk4, 4}, std::pair{Scheme::if_rk2, 2}}) {
            StepperConfig cfg;
            cfg.scheme = scheme;
            cfg.t_end = 0.1;
            auto run = [&](double dt) {
                cfg.dt = dt;
                return simulate(spec, s0, cfg).state;
            };
            auto ref = run(2.5e-4);
            double e1 = distance(run(1e-2), ref);
            double e2 = distance(run(5e-3), ref);
            double ratio = e1 / e2;
            INFO(system_name(sys) << " " << scheme_name(scheme) << " ratio " << ratio);
            CHECK(ratio > 0.8 * std::pow(2.0, order));
            CHECK(ratio < 1.2 * std::pow(2.0, order));
        }
    }
}

TEST_CASE("blow-up detection and configuration checks")
{
    Grid g = Grid::make(2, 16);
    ModelSpec spec;
    StepperConfig cfg;
    SimState s = random_state(spec, g, 2, 4);
    cfg.h3_ceiling = 0.5;
    CHECK_THROWS_AS(step(spec, s, cfg), BlowupError);
    auto res = simulate(spec, s, cfg);
    CHECK(res.blew_up);
    CHECK(res.state.t == 0.0);
    CHECK(res.blowup_time > 0.0);

    StepperConfig bad;
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.cfl = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    StepperConfig c2;
    double dt = stable_dt(spec, s, c2);
    CHECK(dt > 0.0);
    CHECK(dt <= c2.dt);
    s.b *= 1e4;
    CHECK(stable_dt(spec, s, c2) < c2.dt);

    ModelSpec mismatch;
    mismatch.system = System::hallmhd_mixed;
    CHECK_THROWS_AS(rhs(mismatch, s), std::invalid_argument);
}

TEST_CASE("adaptive stepping lands on t_end")
{
    Grid g = Grid::make(2, 16);
    ModelSpec spec;
    StepperConfig cfg;
    cfg.adaptive = true;
    cfg.t_end = 0.037;
    SimState s = random_state(spec, g, 2, 4);
    s.b *= 50.0;
    auto res = simulate(spec, s, cfg);
    CHECK_FALSE(res.blew_up);
    CHECK_THAT(res.state.t, WithinRel(0.037, 1e-14));
}

TEST_CASE("sink sees the initial, strided and final states")
{
    Grid g = Grid::make(2, 16);
    ModelSpec spec;
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.105;
    cfg.diagnostics_stride = 4;
    SimState s = random_state(spec, g, 1, 3);
    std::vector<long> seen;
    long steps = 0;
    simulate(spec, s, cfg, [&](const SimState& st) { seen.push_back(st.step_count); }, [&](const SimState&) { ++steps; });
    CHECK(steps == 11);
    CHECK(seen == std::vector<long>{0, 4, 8, 11});
}

TEST_CASE("alpha outside the theorem range warns")
{
    std::vector<std::string> warnings;
    auto prev = set_warning_handler([&](const std::string& w) { warnings.push_back(w); });
    ModelSpec spec;
    spec.alpha = 0.3;
    CHECK(spec.outside_theorem_range());
    SimState s;
    s.b = VectorField(Grid::make(2, 8));
    StepperConfig cfg;
    cfg.t_end = 0.002;
    simulate(spec, s, cfg);
    set_warning_handler(prev);
    CHECK(warnings.size() == 1);
}
