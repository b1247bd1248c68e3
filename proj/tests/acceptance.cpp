// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "hmhd/commands.hpp"
#include "hmhd/nonlinear.hpp"

using namespace hmhd;

namespace {

constexpr double tol_master = 1e-11;
constexpr double tol_pairs = 1e-12;
constexpr double tol_vi = 1e-12;
constexpr double tol_vi_control = 1e-6;
constexpr double tol_energy_neutral = 1e-12;
constexpr double tol_vorticity = 1e-13;
constexpr double tol_z3 = 1e-11;
constexpr double tol_hall_alt = 1e-11;
constexpr double tol_budget = 1e-6;
constexpr double tol_scaling = 1e-6;
constexpr double tol_prefactor = 1e-12;
constexpr double ratio_lo = 12.8, ratio_hi = 19.2;
constexpr double h3_growth = 10.0;
constexpr double verify_seconds = 120.0;
constexpr double run_seconds = 300.0;
constexpr int ratio_samples = 100;

int failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail)
{
    std::printf("%s [%2d] %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::set<std::string> names_of(const CancellationReport& r)
{
    std::set<std::string> s;
    for (const auto& c : r.checks) s.insert(c.name);
    return s;
}

// Worst residual / scale over entries selected by `pick`, and whether each meets tol.
struct Worst {
    double ratio = 0.0;
    int count = 0;
    bool pass = true;
};

Worst worst_of(const VerifyOutcome& out, double tol, const std::function<bool(const VerifyEntry&)>& pick)
{
    Worst w;
    for (const auto& e : out.entries) {
        if (!pick(e)) continue;
        ++w.count;
        const auto& c = e.check;
        if (c.abs_residual > tol * c.scale) w.pass = false;
        if (c.scale > 0.0) w.ratio = std::max(w.ratio, c.abs_residual / c.scale);
    }
    if (w.count == 0) w.pass = false;
    return w;
}

struct RunSummary {
    double defect = 0.0;
    double h3_ratio = 0.0;
    double seconds = 0.0;
    bool finished = false;
};

RunSummary long_run(System sys)
{
    RunConfig cfg;
    cfg.model.system = sys;
    cfg.model.alpha = 0.6;
    cfg.n = 128;
    cfg.stepper.dt = 1e-3;
    cfg.stepper.t_end = 1.0;
    cfg.initial.h3_norm = 1.0;
    const auto t0 = std::chrono::steady_clock::now();
    SimState init = initial_state(cfg, cfg.model);
    const double e0 = energy(init);
    const double h30 = sobolev_norm(init.b, 3.0);
    double h3max = h30;
    std::vector<DiagnosticsRecord> hist;
    SimResult res = simulate(
        cfg.model, init, cfg.stepper,
        [&](const SimState& s) { hist.push_back(compute_record(cfg.model, s, e0, cfg.diagnostics)); },
        [&](const SimState& s) { h3max = std::max(h3max, sobolev_norm(s.b, 3.0)); });
    RunSummary r;
    r.seconds = seconds_since(t0);
    r.finished = !res.blew_up && std::abs(res.state.t - 1.0) < 1e-12;
    r.defect = energy_budget(hist);
    r.h3_ratio = h3max / h30;
    return r;
}

}

int main()
{
    // Criteria 1-6 and 11 share the verification ensemble.
    RunConfig vcfg;
    vcfg.verify.dims = {2, 3};
    vcfg.verify.n_2d = 64;
    vcfg.verify.band_2d = 10;
    vcfg.verify.seeds_2d = 10;
    vcfg.verify.n_3d = 32;
    vcfg.verify.band_3d = 5;
    vcfg.verify.seeds_3d = 5;
    vcfg.verify.ratio_samples = ratio_samples;
    auto t0 = std::chrono::steady_clock::now();
    VerifyOutcome out = run_verification(vcfg);
    const double verify_time = seconds_since(t0);

    Grid tiny = Grid::make(2, 16);
    auto tiny_b = random_divfree(tiny, 1, 3);
    const auto pair_names = names_of(check_cancellations(build_ledger(tiny_b), tiny_b));
    const auto vi_names = names_of(check_25d_vi_cancellations(tiny_b));
    auto solenoidal = [](const VerifyEntry& e) { return e.field.find("/solenoidal") != std::string::npos; };

    auto master = worst_of(out, tol_master, [](const VerifyEntry& e) {
        return e.check.name == "master identity: pairing = sum of surviving terms";
    });
    report(1, "master identity, 2-D N=64 K=10 x10 and 3-D N=32 K=5 x5", master.pass && verify_time <= verify_seconds,
           "worst " + sci(master.ratio) + " of scale over " + std::to_string(master.count) + " fields (tol " +
               sci(tol_master) + "), suite time " + sci(verify_time) + " s (limit " + sci(verify_seconds) + ")");

    auto pairs = worst_of(out, tol_pairs, [&](const VerifyEntry& e) { return pair_names.count(e.check.name) > 0; });
    report(2, "six pair cancellations incl. non-solenoidal fields", pairs.pass && pairs.count == 6 * 30,
           "worst " + sci(pairs.ratio) + " over " + std::to_string(pairs.count) + " checks (tol " + sci(tol_pairs) + ")");

    auto vi = worst_of(out, tol_vi, [&](const VerifyEntry& e) {
        return e.dim == 2 && solenoidal(e) && vi_names.count(e.check.name) > 0;
    });
    double control = 0.0;
    int controls = 0;
    bool control_pass = true;
    for (const auto& e : out.entries)
        if (e.check.name.rfind("negative control", 0) == 0) {
            ++controls;
            control = controls == 1 ? e.check.lhs : std::min(control, e.check.lhs);
            if (!(e.check.lhs > tol_vi_control)) control_pass = false;
        }
    report(3, "V/VI equalities on solenoidal fields, negative control breaks them",
           vi.pass && control_pass && controls > 0,
           "worst " + sci(vi.ratio) + " over " + std::to_string(vi.count) + " checks (tol " + sci(tol_vi) +
               "); smallest control residual " + sci(control) + " of scale over " + std::to_string(controls) +
               " generic fields (needs > " + sci(tol_vi_control) + ")");

    auto neutral = worst_of(out, tol_energy_neutral,
                            [](const VerifyEntry& e) { return e.check.name == "Hall term energy neutrality"; });
    report(4, "Hall energy neutrality", neutral.pass && neutral.count == 30,
           "worst " + sci(neutral.ratio) + " of ||j|| ||grad b|| ||b|| over " + std::to_string(neutral.count) +
               " fields (tol " + sci(tol_energy_neutral) + ")");

    auto vort = worst_of(out, tol_vorticity, [](const VerifyEntry& e) {
        return e.check.name == "(omega . grad) u3 = 0" || e.check.name == "(j . grad) b3 = 0";
    });
    auto z3 = worst_of(out, tol_z3, [](const VerifyEntry& e) { return e.check.name == "z3 equation assembly"; });
    report(5, "2-D vorticity cancellations and z3 assembly", vort.pass && z3.pass,
           "vorticity worst " + sci(vort.ratio) + " (tol " + sci(tol_vorticity) + "), z3 worst " + sci(z3.ratio) +
               " (tol " + sci(tol_z3) + ")");

    auto alt = worst_of(out, tol_hall_alt, [](const VerifyEntry& e) { return e.check.name == "hall_term = hall_term_alt"; });
    report(6, "Hall term equals its advective form", alt.pass && alt.count == 15,
           "worst relative " + sci(alt.ratio) + " over " + std::to_string(alt.count) + " solenoidal fields (tol " +
               sci(tol_hall_alt) + ")");

    RunSummary em = long_run(System::electron_aniso);
    RunSummary hall = long_run(System::hallmhd_mixed);
    report(7, "energy budget, N=128 dt=1e-3 T=1",
           em.finished && hall.finished && em.defect <= tol_budget && hall.defect <= tol_budget &&
               em.seconds <= run_seconds && hall.seconds <= run_seconds,
           "electron defect " + sci(em.defect) + " in " + sci(em.seconds) + " s, Hall-MHD defect " + sci(hall.defect) +
               " in " + sci(hall.seconds) + " s (tol " + sci(tol_budget) + ", limit " + sci(run_seconds) + " s)");

    {
        RunConfig cfg;
        Grid g = cfg.grid();
        VectorField b0 = random_divfree(g, cfg.seed, cfg.scaling.band);
        b0 *= 1.0 / sobolev_norm(b0, 3.0);
        StepperConfig sc;
        sc.dt = 1e-4;
        auto rep = scaling_test(1.5, 2, b0, 0.1, sc, 10);
        report(8, "scaling invariance, beta=3/2 lambda=2 T=0.1 dt=1e-4",
               rep.mismatch <= tol_scaling && std::abs(rep.l2_prefactor - 1.0) <= tol_prefactor,
               "mismatch " + sci(rep.mismatch) + " (tol " + sci(tol_scaling) + "), L2 prefactor - 1 = " +
                   sci(rep.l2_prefactor - 1.0) + " (tol " + sci(tol_prefactor) + ")");
    }

    {
        Grid g = Grid::make(2, 32);
        ModelSpec spec;
        SimState s;
        s.b = random_divfree(g, 1, 4);
        s.b *= 1.0 / sobolev_norm(s.b, 3.0);
        StepperConfig cfg;
        cfg.t_end = 0.1;
        auto run = [&](double dt) {
            cfg.dt = dt;
            return simulate(spec, s, cfg).state.b;
        };
        auto a = run(1e-2), b = run(5e-3), c = run(2.5e-3);
        const double ratio = l2_norm(a - b) / l2_norm(b - c);
        report(9, "if_rk4 self-convergence under dt halving", ratio >= ratio_lo && ratio <= ratio_hi,
               "ratio " + sci(ratio) + " (range [" + sci(ratio_lo) + ", " + sci(ratio_hi) + "])");
    }

    report(10, "H3 stays bounded on the electron run", em.finished && em.h3_ratio <= h3_growth,
           "max ||b(t)||_H3 / ||b0||_H3 = " + sci(em.h3_ratio) + " (limit " + sci(h3_growth) + ")");

    bool ratios_ok = out.ratios.size() == 5;
    std::string detail;
    for (const auto& r : out.ratios) {
        ratios_ok = ratios_ok && r.finite && r.samples == ratio_samples && std::isfinite(r.max);
        detail += (detail.empty() ? "" : ", ") + r.name + " max " + sci(r.max);
    }
    report(11, "bound-functional ratio studies, 100 fields per setting", ratios_ok, detail);

    std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
