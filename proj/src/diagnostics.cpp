#include "hmhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hmhd/log.hpp"
#include "hmhd/nonlinear.hpp"

namespace hmhd {

namespace {

// Pointwise Euclidean norm of a list of scalars on q.
std::vector<double> magnitude(const std::vector<SpectralScalar>& fs, const Quadrature& q)
{
    std::vector<double> acc(q.size(), 0.0);
    for (const auto& f : fs) {
        if (f.is_zero()) continue;
        auto v = to_physical(f, q);
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i] * v[i];
    }
    for (auto& x : acc) x = std::sqrt(x);
    return acc;
}

double weighted_seminorm2(const SpectralScalar& f, double p)
{
    return std::pow(sobolev_seminorm(f, 0.5 * p), 2);
}

}

CriterionSurrogates criterion_surrogates(const SimState& s, double p1, double r1, double p2, double r2)
{
    if (3.0 / p1 + 2.0 / r1 > 1.0)
        warn("criterion exponents (p1, r1) violate 3/p1 + 2/r1 <= 1");
    if (3.0 / p2 + 2.0 / r2 > 2.0)
        warn("criterion exponents (p2, r2) violate 3/p2 + 2/r2 <= 2");
    const Grid& g = s.b.grid();
    CriterionSurrogates c;
    if (s.u) {
        std::vector<SpectralScalar> uh{(*s.u)[0], (*s.u)[1]};
        const int band = std::max((*s.u)[0].effective_band(), (*s.u)[1].effective_band());
        const Quadrature q = lp_quadrature(g, band, p1);
        c.u_h_lp = std::pow(lp_norm_of_samples(magnitude(uh, q), q, g, p1), r1);
    }
    std::vector<SpectralScalar> d2;
    for (int comp = 0; comp < 2; ++comp)
        for (int a = 0; a < g.dim; ++a)
            for (int b = 0; b < g.dim; ++b) {
                Mode o{0, 0, 0};
                o[a] += 1;
                o[b] += 1;
                d2.push_back(derivative(s.b[comp], o));
            }
    const int band_h = std::max(s.b[0].effective_band(), s.b[1].effective_band());
    const Quadrature q2 = lp_quadrature(g, band_h, p2);
    c.grad2_b_h_lp = std::pow(lp_norm_of_samples(magnitude(d2, q2), q2, g, p2), r2);
    VectorField j = current_density(s.b);
    const Quadrature qn = native_quadrature(g);
    auto mj = magnitude({j[0], j[1], j[2]}, qn);
    const double jmax = mj.empty() ? 0.0 : *std::max_element(mj.begin(), mj.end());
    c.j_linf2 = jmax * jmax;
    return c;
}

double z3_residual(const VectorField& u, const VectorField& b, const ModelSpec& spec)
{
    if (u.grid().dim != 2) throw std::invalid_argument("z3_residual: requires a 2-D grid");
    const double a2 = 2.0 * spec.alpha;
    SpectralScalar w3 = partial_derivative(u[1], 1) - partial_derivative(u[0], 2);
    // b3 equation: -(u . grad) b3 - eps [curl(j x b)]_3 - eta Lambda^{2 alpha} b3 + (b . grad) u3.
    SpectralScalar b3_rhs = -advect(u, b[2]) - spec.eps * hall_term(b)[2] -
                            spec.eta * fractional_laplacian(b[2], a2) + advect(b, u[2]);
    SpectralScalar primitive = omega3_rhs(u, b, spec.alpha, spec.nu) + b3_rhs;
    SpectralScalar z3 = w3 + b[2];
    SpectralScalar closed = -advect(u, z3) + advect(b, u[2]) - fractional_laplacian(z3, a2);
    const double diff = l2_norm(primitive - closed);
    const double scale = std::max(l2_norm(primitive), l2_norm(closed));
    return scale > 0.0 ? diff / scale : 0.0;
}

DiagnosticsRecord compute_record(const ModelSpec& spec, const SimState& s, double e0, const DiagnosticsOptions& opt)
{
    DiagnosticsRecord r;
    r.t = s.t;
    r.step = s.step_count;
    r.dt = s.last_dt;
    r.l2_b = l2_norm(s.b);
    r.l2_u = s.u ? l2_norm(*s.u) : 0.0;
    for (double sv : opt.sobolev_s) r.hs_norms.emplace_back(sv, sobolev_norm(s.b, sv));
    const auto pb = spec.b_exponents();
    r.dissipation_h = spec.eta * (weighted_seminorm2(s.b[0], pb[0]) + weighted_seminorm2(s.b[1], pb[1]));
    r.dissipation_v = spec.eta * weighted_seminorm2(s.b[2], pb[2]);
    r.energy = energy(s);
    r.dissipated = s.dissipated;
    r.energy_defect = e0 > 0.0 ? std::abs(r.energy + r.dissipated - e0) / e0 : 0.0;
    auto [bh, bv] = split_hv(s.b);
    r.div_b_h = divergence_ratio(bh);
    r.div_u = s.u ? divergence_ratio(*s.u) : 0.0;
    r.criterion = criterion_surrogates(s, opt.p1, opt.r1, opt.p2, opt.r2);
    r.linf_j = std::sqrt(r.criterion.j_linf2);
    if (spec.system == System::hallmhd_mixed && s.u && s.b.grid().dim == 2) r.z3_residual = z3_residual(*s.u, s.b, spec);
    return r;
}

double energy_budget(const std::vector<DiagnosticsRecord>& history)
{
    if (history.empty()) return 0.0;
    const double e0 = history.front().energy + history.front().dissipated;
    if (!(e0 > 0.0)) return 0.0;
    double worst = 0.0;
    for (const auto& r : history) worst = std::max(worst, std::abs(r.energy + r.dissipated - e0) / e0);
    return worst;
}

namespace {

constexpr double land_slack = 1e-13;

SimState advance_to(const ModelSpec& spec, SimState s, double target, const StepperConfig& cfg)
{
    while (s.t < target - land_slack * std::max(1.0, target)) s = step(spec, s, cfg, std::min(cfg.dt, target - s.t));
    return s;
}

}

ScalingReport scaling_test(double beta, int lambda, const VectorField& b0, double T, const StepperConfig& cfg,
                           int checkpoints, double eps)
{
    if (lambda < 2) throw std::invalid_argument("scaling_test: lambda must be an integer >= 2");
    if (checkpoints < 1) throw std::invalid_argument("scaling_test: need at least one checkpoint");
    cfg.validate();
    const Grid& g = b0.grid();
    int n_min = g.n[0];
    for (int a = 1; a < g.dim; ++a) n_min = std::min(n_min, g.n[a]);
    if (4 * lambda * b0.effective_band() > n_min)
        throw std::invalid_argument("scaling_test: band of b0 exceeds N / (4 lambda)");

    ModelSpec spec;
    spec.system = System::electron_general;
    spec.beta = beta;
    spec.eps = eps;

    const double amp = std::pow(double(lambda), 2.0 * beta - 2.0);
    const double clock = std::pow(double(lambda), 2.0 * beta);

    ScalingReport rep;
    rep.lambda = lambda;
    rep.beta = beta;
    rep.T = T;
    rep.dt = cfg.dt;
    rep.checkpoints = checkpoints;
    rep.expected_prefactor = std::pow(double(lambda), 4.0 * beta - 4.0 - g.dim);

    // The unscaled run keeps the modes that survive rescaling onto the grid band.
    Grid coarse = g;
    coarse.band_limit = g.band_limit / lambda;
    SimState a;
    a.b = resample(b0, coarse);
    SimState b;
    b.b = amp * rescale(b0, lambda);

    const double n0 = std::pow(l2_norm(b0), 2);
    if (n0 > 0.0) {
        rep.l2_ratio_torus = std::pow(l2_norm(b.b), 2) / n0;
        rep.l2_prefactor = rep.l2_ratio_torus / std::pow(double(lambda), g.dim);
    } else {
        rep.l2_ratio_torus = rep.l2_prefactor = std::nan("");
    }

    for (int jc = 1; jc <= checkpoints; ++jc) {
        const double tj = T * jc / checkpoints;
        a = advance_to(spec, a, tj, cfg);
        b = advance_to(spec, b, tj / clock, cfg);
        VectorField mapped = amp * rescale(resample(a.b, g), lambda);
        const double diff = l2_norm(mapped - b.b);
        const double ref = l2_norm(b.b);
        const double m = ref > 0.0 ? diff / ref : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        rep.mismatch = std::max(rep.mismatch, m);
    }
    return rep;
}

}
