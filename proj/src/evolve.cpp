#include "hmhd/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <vector>

#include "hmhd/log.hpp"
#include "hmhd/nonlinear.hpp"

namespace hmhd {

const char* system_name(System s)
{
    switch (s) {
    case System::electron_aniso: return "electron_aniso";
    case System::electron_general: return "electron_general";
    case System::hallmhd_mixed: return "hallmhd_mixed";
    case System::hallmhd_classical: return "hallmhd_classical";
    }
    return "?";
}

System parse_system(const std::string& name)
{
    for (System s : {System::electron_aniso, System::electron_general, System::hallmhd_mixed,
                     System::hallmhd_classical})
        if (name == system_name(s)) return s;
    throw std::invalid_argument("unknown system '" + name + "'");
}

bool ModelSpec::has_velocity() const
{
    return system == System::hallmhd_mixed || system == System::hallmhd_classical;
}

std::array<double, 3> ModelSpec::b_exponents() const
{
    switch (system) {
    case System::electron_aniso:
    case System::hallmhd_mixed: return {3.0, 3.0, 2.0 * alpha};
    case System::electron_general: return {2.0 * beta, 2.0 * beta, 2.0 * beta};
    case System::hallmhd_classical: return {2.0, 2.0, 2.0};
    }
    return {};
}

std::array<double, 3> ModelSpec::u_exponents() const
{
    if (system == System::hallmhd_mixed) return {2.0 * alpha, 2.0 * alpha, 2.0};
    return {2.0, 2.0, 2.0};
}

bool ModelSpec::outside_theorem_range() const
{
    if (system != System::electron_aniso && system != System::hallmhd_mixed) return false;
    return !(alpha > 0.5 && alpha < 1.0);
}

const char* scheme_name(Scheme s) { return s == Scheme::if_rk4 ? "if_rk4" : "if_rk2"; }

Scheme parse_scheme(const std::string& name)
{
    if (name == "if_rk4") return Scheme::if_rk4;
    if (name == "if_rk2") return Scheme::if_rk2;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

void StepperConfig::validate() const
{
    if (!(dt > 0.0)) throw std::invalid_argument("stepper.dt must be positive");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("stepper.cfl must lie in (0, 1]");
    if (!(t_end >= 0.0)) throw std::invalid_argument("stepper.t_end must be non-negative");
    if (diagnostics_stride < 1) throw std::invalid_argument("stepper.diagnostics_stride must be >= 1");
    if (!(h3_ceiling > 0.0)) throw std::invalid_argument("stepper.h3_ceiling must be positive");
}

namespace {

std::string short_num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void drop_mean(SpectralScalar& f) { f.data()[0] = 0.0; }

}

Rhs rhs(const ModelSpec& spec, const SimState& state)
{
    if (spec.has_velocity() != state.u.has_value())
        throw std::invalid_argument("rhs: velocity field presence does not match the model");
    const VectorField& b = state.b;
    Rhs r;
    if (!spec.has_velocity()) {
        r.db = -spec.eps * hall_term(b);
        return r;
    }
    const VectorField& u = *state.u;
    const Grid& g = b.grid();
    const int dim = g.dim;
    std::array<std::array<SpectralScalar, 3>, 3> du, db;
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < dim; ++k) {
            du[c][k] = partial_derivative(u[c], k + 1);
            db[c][k] = partial_derivative(b[c], k + 1);
        }
    VectorField j = current_density(b);
    std::vector<std::vector<BilinearTerm>> sums(9);
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < dim; ++k) {
            sums[c].push_back({-1.0, &u[k], &du[c][k]});
            sums[c].push_back({1.0, &b[k], &db[c][k]});
            sums[3 + c].push_back({-1.0, &u[k], &db[c][k]});
            sums[3 + c].push_back({1.0, &b[k], &du[c][k]});
        }
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, e = (c + 2) % 3;
        sums[6 + c] = {{1.0, &j[a], &b[e]}, {-1.0, &j[e], &b[a]}};
    }
    auto p = bilinear_sums(sums, g.band_limit);
    VectorField jxb(p[6], p[7], p[8]);
    r.du = leray_project(VectorField(p[0], p[1], p[2]));
    r.db = VectorField(p[3], p[4], p[5]) - spec.eps * curl(jxb);
    // Every term is a divergence for solenoidal fields; the mean is dropped to keep it exact.
    for (int c = 0; c < 3; ++c) {
        drop_mean((*r.du)[c]);
        drop_mean(r.db[c]);
    }
    return r;
}

namespace {

// State packed as components b1..b3 (u1..u3), with per-component diffusion symbols.
using Pack = std::vector<SpectralScalar>;

struct Diffusion {
    std::vector<std::vector<double>> symbol;  // coef |xi|^p per storage index
    mutable std::map<double, std::shared_ptr<const std::vector<std::vector<double>>>> cached;

    Diffusion(const ModelSpec& spec, const Grid& g)
    {
        auto add = [&](double coef, const std::array<double, 3>& p) {
            for (int c = 0; c < 3; ++c) {
                std::vector<double> s(g.size(), 0.0);
                for_each_mode(g, g.band_limit, [&](const Mode& m, std::size_t idx) {
                    double k2 = wavenumber_norm2(g, m);
                    s[idx] = k2 > 0.0 ? coef * std::pow(k2, 0.5 * p[c]) : 0.0;
                });
                symbol.push_back(std::move(s));
            }
        };
        add(spec.eta, spec.b_exponents());
        if (spec.has_velocity()) add(spec.nu, spec.u_exponents());
    }

    using Factors = std::vector<std::vector<double>>;

    std::shared_ptr<const Factors> factors(double h) const
    {
        auto it = cached.find(h);
        if (it != cached.end()) return it->second;
        if (cached.size() > 8) cached.clear();
        auto f = std::make_shared<Factors>(symbol.size());
        for (std::size_t c = 0; c < symbol.size(); ++c) {
            (*f)[c].resize(symbol[c].size());
            for (std::size_t i = 0; i < symbol[c].size(); ++i) (*f)[c][i] = std::exp(-symbol[c][i] * h);
        }
        cached.emplace(h, f);
        return f;
    }

    double rate(const Pack& y, double volume) const
    {
        double d = 0.0;
        for (std::size_t c = 0; c < y.size(); ++c) {
            const auto& co = y[c].coeffs();
            for (std::size_t i = 0; i < co.size(); ++i) d += symbol[c][i] * std::norm(co[i]);
        }
        return volume * d;
    }
};

// Symbols and factors are reused across steps of the same run on this thread.
const Diffusion& diffusion_for(const ModelSpec& spec, const Grid& g)
{
    thread_local ModelSpec last_spec;
    thread_local Grid last_grid;
    thread_local std::unique_ptr<Diffusion> last;
    if (!last || !(last_spec == spec) || !(last_grid == g)) {
        last = std::make_unique<Diffusion>(spec, g);
        last_spec = spec;
        last_grid = g;
    }
    return *last;
}

Pack pack(const SimState& s)
{
    Pack p(s.b.c.begin(), s.b.c.end());
    if (s.u) p.insert(p.end(), s.u->c.begin(), s.u->c.end());
    return p;
}

void unpack(const Pack& p, SimState& s)
{
    for (int c = 0; c < 3; ++c) s.b[c] = p[c];
    if (s.u)
        for (int c = 0; c < 3; ++c) (*s.u)[c] = p[3 + c];
}

Pack scaled(const std::vector<std::vector<double>>& e, Pack y)
{
    for (std::size_t c = 0; c < y.size(); ++c) {
        auto& d = y[c].data();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] *= e[c][i];
    }
    return y;
}

// a + s b
Pack axpy(Pack a, double s, const Pack& b)
{
    for (std::size_t c = 0; c < a.size(); ++c) {
        auto& d = a[c].data();
        const auto& o = b[c].coeffs();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] += s * o[i];
    }
    return a;
}

struct Nonlinear {
    const ModelSpec& spec;
    const SimState& proto;
    bool enabled;

    Pack operator()(const Pack& y) const
    {
        if (!enabled) {
            Pack z;
            for (const auto& f : y) z.emplace_back(f.grid());
            return z;
        }
        SimState s = proto;
        unpack(y, s);
        Rhs r = rhs(spec, s);
        Pack out(r.db.c.begin(), r.db.c.end());
        if (r.du) out.insert(out.end(), r.du->c.begin(), r.du->c.end());
        return out;
    }
};

bool all_finite(const Pack& y)
{
    for (const auto& f : y)
        for (const auto& v : f.coeffs())
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

}

double dissipation_rate(const ModelSpec& spec, const VectorField& b, const std::optional<VectorField>& u)
{
    SimState s;
    s.b = b;
    s.u = u;
    return diffusion_for(spec, b.grid()).rate(pack(s), b.grid().volume());
}

double energy(const SimState& s)
{
    double e = 0.5 * std::pow(l2_norm(s.b), 2);
    if (s.u) e += 0.5 * std::pow(l2_norm(*s.u), 2);
    return e;
}

SimState step(const ModelSpec& spec, const SimState& state, const StepperConfig& cfg, double h)
{
    if (spec.has_velocity() != state.u.has_value())
        throw std::invalid_argument("step: velocity field presence does not match the model");
    const Grid& g = state.b.grid();
    const Diffusion& diff = diffusion_for(spec, g);
    const double vol = g.volume();
    const Nonlinear N{spec, state, cfg.nonlinear};
    const Pack y = pack(state);
    Pack next;
    double q = 0.0;
    if (cfg.scheme == Scheme::if_rk4) {
        const auto eh_ptr = diff.factors(h), eh2_ptr = diff.factors(0.5 * h);
        const auto& eh = *eh_ptr;
        const auto& eh2 = *eh2_ptr;
        const Pack k1 = N(y);
        const Pack y2 = scaled(eh2, axpy(y, 0.5 * h, k1));
        const Pack k2 = N(y2);
        const Pack ey2 = scaled(eh2, y);
        const Pack y3 = axpy(ey2, 0.5 * h, k2);
        const Pack k3 = N(y3);
        const Pack y4 = axpy(scaled(eh, y), h, scaled(eh2, k3));
        const Pack k4 = N(y4);
        Pack acc = scaled(eh, k1);
        acc = axpy(acc, 2.0, scaled(eh2, axpy(k2, 1.0, k3)));
        acc = axpy(acc, 1.0, k4);
        next = axpy(scaled(eh, y), h / 6.0, acc);
        q = h / 6.0 * (diff.rate(y, vol) + 2.0 * diff.rate(y2, vol) + 2.0 * diff.rate(y3, vol) + diff.rate(y4, vol));
    } else {
        const auto eh_ptr = diff.factors(h);
        const auto& eh = *eh_ptr;
        const Pack k1 = N(y);
        const Pack y2 = scaled(eh, axpy(y, h, k1));
        const Pack k2 = N(y2);
        next = axpy(scaled(eh, axpy(y, 0.5 * h, k1)), 0.5 * h, k2);
        q = 0.5 * h * (diff.rate(y, vol) + diff.rate(y2, vol));
    }

    SimState out = state;
    unpack(next, out);
    out.b = leray_project(out.b);
    if (out.u) out.u = leray_project(*out.u);
    out.t = state.t + h;
    out.step_count = state.step_count + 1;
    out.last_dt = h;
    out.dissipated = state.dissipated + q;

    if (!all_finite(pack(out)) || !std::isfinite(q))
        throw BlowupError("non-finite values at t = " + short_num(out.t), out.t);
    const double h3 = sobolev_norm(out.b, 3.0);
    if (h3 > cfg.h3_ceiling)
        throw BlowupError("H3 norm " + short_num(h3) + " exceeds the ceiling " + short_num(cfg.h3_ceiling) +
                              " at t = " + short_num(out.t),
                          out.t);
    return out;
}

SimState step(const ModelSpec& spec, const SimState& state, const StepperConfig& cfg)
{
    return step(spec, state, cfg, cfg.dt);
}

namespace {

std::vector<double> pointwise_norm(const std::vector<const SpectralScalar*>& fs, const Quadrature& q)
{
    std::vector<double> acc(q.size(), 0.0);
    for (const auto* f : fs) {
        if (f->is_zero()) continue;
        auto v = to_physical(*f, q);
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i] * v[i];
    }
    for (auto& x : acc) x = std::sqrt(x);
    return acc;
}

}

double stable_dt(const ModelSpec& spec, const SimState& state, const StepperConfig& cfg)
{
    const Grid& g = state.b.grid();
    const Quadrature q = native_quadrature(g);
    const double K = std::max(g.band_limit, 1);
    std::vector<SpectralScalar> grad;
    for (int c = 0; c < 3; ++c)
        for (int k = 1; k <= g.dim; ++k) grad.push_back(partial_derivative(state.b[c], k));
    std::vector<const SpectralScalar*> gp;
    for (const auto& f : grad) gp.push_back(&f);
    auto gb = pointwise_norm(gp, q);
    double dt = cfg.dt;
    const double max_grad = *std::max_element(gb.begin(), gb.end());
    if (max_grad > 0.0 && spec.eps != 0.0) dt = std::min(dt, cfg.cfl / (std::abs(spec.eps) * max_grad * K * K));
    if (state.u) {
        auto su = pointwise_norm({&(*state.u)[0], &(*state.u)[1], &(*state.u)[2]}, q);
        auto sb = pointwise_norm({&state.b[0], &state.b[1], &state.b[2]}, q);
        double speed = 0.0;
        for (std::size_t i = 0; i < su.size(); ++i) speed = std::max(speed, su[i] + sb[i]);
        if (speed > 0.0) dt = std::min(dt, cfg.cfl / (speed * K));
    }
    return dt;
}

SimResult simulate(const ModelSpec& spec, const SimState& initial, const StepperConfig& cfg, const DiagnosticsSink& sink,
                   const StepObserver& on_step)
{
    cfg.validate();
    if (spec.outside_theorem_range())
        warn("alpha = " + std::to_string(spec.alpha) + " lies outside (1/2, 1); run tagged outside_theorem_range");
    SimResult r;
    r.state = initial;
    if (sink) sink(r.state);
    const double slack = 1e-12 * std::max(1.0, cfg.t_end);
    long since_emit = 0;
    while (r.state.t < cfg.t_end - slack) {
        double dt = cfg.adaptive ? stable_dt(spec, r.state, cfg) : cfg.dt;
        dt = std::min(dt, cfg.t_end - r.state.t);
        try {
            r.state = step(spec, r.state, cfg, dt);
        } catch (const BlowupError& e) {
            r.blew_up = true;
            r.blowup_time = e.time();
            r.message = e.what();
            return r;
        }
        since_emit++;
        if (on_step) on_step(r.state);
        if (sink && r.state.step_count % cfg.diagnostics_stride == 0) {
            sink(r.state);
            since_emit = 0;
        }
    }
    if (sink && since_emit > 0) sink(r.state);
    return r;
}

}
