#include "hmhd/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "hmhd/log.hpp"
#include "hmhd/nonlinear.hpp"
#include "hmhd/snapshot.hpp"

namespace hmhd {

namespace fs = std::filesystem;
using nlohmann::json;

bool VerifyOutcome::all_pass() const
{
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.check.pass; }) &&
           std::all_of(ratios.begin(), ratios.end(), [](const auto& r) { return r.finite; });
}

const VerifyEntry* VerifyOutcome::first_failure() const
{
    for (const auto& e : entries)
        if (!e.check.pass) return &e;
    return nullptr;
}

int worker_count()
{
    const char* env = std::getenv("HMHD_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
        warn(std::string("ignoring invalid HMHD_THREADS='") + env + "'");
        return 1;
    }
    return int(std::min<long>(v, 256));
}

namespace {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct FieldJob {
    int dim;
    std::uint64_t seed;
    bool solenoidal;
    Grid grid;
    int band;
};

std::vector<VerifyEntry> run_field(const FieldJob& job, const std::string& fault)
{
    const std::string name = std::to_string(job.dim) + "d/seed=" + std::to_string(job.seed) + "/" +
                             (job.solenoidal ? "solenoidal" : "generic");
    VectorField b = job.solenoidal ? random_divfree(job.grid, job.seed, job.band)
                                   : random_field(job.grid, job.seed, job.band);
    std::vector<VerifyEntry> out;
    auto take = [&](const CancellationReport& r, const TermLedger* ledger) {
        for (const auto& c : r.checks) {
            VerifyEntry e{name, job.dim, job.seed, c, {}};
            if (ledger && !c.pass) e.suspects = sign_flip_suspects(c, *ledger);
            out.push_back(std::move(e));
        }
    };

    LedgerOptions opt;
    opt.flip_sign_label = fault;
    TermLedger ledger = build_ledger(b, opt);
    take(ledger.internal, &ledger);
    take(check_cancellations(ledger, b), &ledger);
    take(check_master_identity(ledger, b), &ledger);

    CancellationReport extra;
    if (job.dim == 2) {
        if (job.solenoidal) {
            take(check_25d_vi_cancellations(b, ViHypothesis::require), nullptr);
        } else {
            // Negative control: without div b_h = 0 the V/VI pair equalities must break.
            CancellationReport vi = check_25d_vi_cancellations(b, ViHypothesis::evaluate_all);
            double worst = 0.0, scale = 0.0;
            for (const auto& c : vi.checks)
                if (std::find(vi_pair_check_names().begin(), vi_pair_check_names().end(), c.name) !=
                        vi_pair_check_names().end() &&
                    c.scale > 0.0 && c.abs_residual / c.scale > worst) {
                    worst = c.abs_residual / c.scale;
                    scale = c.scale;
                }
            CancellationCheck c;
            c.name = "negative control: V/VI pair equalities fail without div b_h = 0";
            c.lhs = worst;
            c.expected = 1e-6;
            c.abs_residual = worst;
            c.scale = scale;
            c.tol = 1e-6;
            c.pass = worst > 1e-6;
            out.push_back({name, job.dim, job.seed, c, {}});
        }
    } else {
        take(check_3d_rewrites(b), nullptr);
    }

    VectorField j = current_density(b);
    VectorField hall = hall_term(b);
    extra.add("Hall term energy neutrality", inner_product(hall, b), 0.0,
              l2_norm(j) * gradient_norm(b) * l2_norm(b), tol_trilinear);
    if (job.solenoidal) {
        extra.add("hall_term = hall_term_alt", l2_norm(hall - hall_term_alt(b)), 0.0, l2_norm(hall), tol_fourth_order);
        if (job.dim == 2) {
            VectorField u = random_divfree(job.grid, job.seed + 7919, job.band);
            auto v = vorticity_cancellation_residuals(u, b);
            extra.add("(omega . grad) u3 = 0", v.omega_u3, 0.0, v.scale_u, 1e-13);
            extra.add("(j . grad) b3 = 0", v.j_b3, 0.0, v.scale_b, 1e-13);
            ModelSpec spec;
            spec.system = System::hallmhd_mixed;
            extra.add("z3 equation assembly", z3_residual(u, b, spec), 0.0, 1.0, tol_fourth_order);
        }
    }
    take(extra, nullptr);
    return out;
}

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int workers, F&& fn)
{
    std::vector<T> out(n);
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto work = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    const int w = std::max(1, std::min<int>(workers, int(n)));
    std::vector<std::thread> pool;
    for (int t = 1; t < w; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
    return out;
}

json check_json(const VerifyEntry& e)
{
    const auto& c = e.check;
    json j{{"name", c.name}, {"field", e.field}, {"dim", e.dim}, {"seed", e.seed},
           {"lhs", c.lhs}, {"expected", c.expected}, {"abs_residual", c.abs_residual},
           {"scale", c.scale}, {"tol", c.tol}, {"pass", c.pass}, {"labels", c.labels}};
    if (!e.suspects.empty()) j["sign_flip_suspects"] = e.suspects;
    return j;
}

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

void write_json(const std::string& path, const json& j)
{
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << j.dump(2) << '\n';
}

}

VerifyOutcome run_verification(const RunConfig& cfg, int workers)
{
    if (workers <= 0) workers = worker_count();
    std::vector<FieldJob> jobs;
    for (int dim : cfg.verify.dims) {
        const int n = dim == 2 ? cfg.verify.n_2d : cfg.verify.n_3d;
        const int band = dim == 2 ? cfg.verify.band_2d : cfg.verify.band_3d;
        const int seeds = dim == 2 ? cfg.verify.seeds_2d : cfg.verify.seeds_3d;
        Grid g;
        try {
            g = Grid::make(dim, n);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("verify grid: ") + e.what());
        }
        if (band < 1 || band > g.band_limit) throw ConfigError("verify band must lie in [1, n/2 - 1]");
        for (int i = 0; i < seeds; ++i)
            for (bool sol : {true, false}) jobs.push_back({dim, cfg.seed + std::uint64_t(i), sol, g, band});
    }
    auto per_job = parallel_map<std::vector<VerifyEntry>>(
        jobs.size(), workers, [&](std::size_t i) { return run_field(jobs[i], cfg.verify.inject_fault); });
    VerifyOutcome out;
    for (auto& v : per_job) out.entries.insert(out.entries.end(), v.begin(), v.end());

    if (cfg.verify.ratio_samples > 0) {
        struct RatioJob {
            RatioSetting s;
            Grid g;
            int band;
        };
        std::vector<RatioJob> rj;
        for (int dim : cfg.verify.dims) {
            if (dim == 2) {
                Grid g = Grid::make(2, cfg.verify.n_2d);
                rj.push_back({RatioSetting::h2_25d, g, cfg.verify.band_2d});
                rj.push_back({RatioSetting::h1_25d, g, cfg.verify.band_2d});
            } else {
                Grid g = Grid::make(3, cfg.verify.n_3d);
                rj.push_back({RatioSetting::h2_3d_general, g, cfg.verify.band_3d});
                rj.push_back({RatioSetting::h2_3d_solenoidal, g, cfg.verify.band_3d});
                rj.push_back({RatioSetting::h1_3d, g, cfg.verify.band_3d});
            }
        }
        out.ratios = parallel_map<RatioStudy>(rj.size(), workers, [&](std::size_t i) {
            return ratio_study(rj[i].s, rj[i].g, rj[i].band, cfg.verify.ratio_samples, cfg.seed);
        });
    }
    return out;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log)
{
    VerifyOutcome out;
    try {
        validate(cfg);
        out = run_verification(cfg);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::invalid_argument& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config_error;
    }

    json report;
    report["checks"] = json::array();
    for (const auto& e : out.entries) report["checks"].push_back(check_json(e));
    report["ratio_studies"] = json::array();
    for (const auto& r : out.ratios)
        report["ratio_studies"].push_back(
            {{"setting", r.name}, {"samples", r.samples}, {"max", r.max}, {"median", r.median}, {"finite", r.finite}});
    const std::size_t failed = std::count_if(out.entries.begin(), out.entries.end(), [](const auto& e) { return !e.check.pass; });
    report["summary"] = {{"checks", out.entries.size()}, {"failed", failed}, {"all_pass", out.all_pass()}};
    if (const auto* f = out.first_failure()) report["summary"]["first_failure"] = check_json(*f);

    if (cfg.output.wants("json")) {
        try {
            ensure_dir(cfg.output.dir);
            write_json((fs::path(cfg.output.dir) / cfg.verify.report).string(), report);
        } catch (const std::exception& e) {
            log << "error: " << e.what() << '\n';
            return exit_config_error;
        }
    }

    log << "checks: " << out.entries.size() << ", failed: " << failed << '\n';
    for (const auto& r : out.ratios)
        log << "ratio " << r.name << ": max " << fmt(r.max) << ", median " << fmt(r.median) << " over " << r.samples
            << " fields" << (r.finite ? "" : " (non-finite values)") << '\n';
    if (const auto* f = out.first_failure()) {
        log << "FAIL: " << f->check.name << " on " << f->field << " (residual " << fmt(f->check.abs_residual)
            << ", scale " << fmt(f->check.scale) << ", tol " << fmt(f->check.tol) << ")\n";
        if (!f->suspects.empty()) {
            log << "  sign-flip suspects:";
            for (const auto& s : f->suspects) log << ' ' << s;
            log << '\n';
        } else if (!f->check.labels.empty()) {
            log << "  labels:";
            for (const auto& s : f->check.labels) log << ' ' << s;
            log << '\n';
        }
        return exit_check_failed;
    }
    if (!out.all_pass()) {
        log << "FAIL: a bound-functional ratio study produced non-finite values\n";
        return exit_check_failed;
    }
    log << "all checks passed\n";
    return exit_ok;
}

namespace {

VectorField analytic_field(const std::string& name, const Grid& g)
{
    VectorField b(g, FieldKind::magnetic);
    auto sin_mode = [&](int axis) {
        SpectralScalar f(g);
        Mode m{0, 0, 0};
        m[axis] = 1;
        f.set_mode(m, cplx(0.0, -0.5));
        return f;
    };
    if (name == "zero") return b;
    if (name == "b3_sin_x1") b[2] = sin_mode(0);
    else if (name == "b1_sin_x2") b[0] = sin_mode(1);
    else if (name == "b2_sin_x1") b[1] = sin_mode(0);
    else throw ConfigError("initial.name: unknown analytic field '" + name + "'");
    return b;
}

void normalize_h3(VectorField& f, double target)
{
    if (target <= 0.0) return;
    const double h3 = sobolev_norm(f, 3.0);
    if (h3 > 0.0) f *= target / h3;
}

}

SimState initial_state(const RunConfig& cfg, const ModelSpec& spec)
{
    const Grid g = cfg.grid();
    SimState s;
    const auto& in = cfg.initial;
    if (in.type == "snapshot") {
        Snapshot snap;
        try {
            snap = read_snapshot(in.path, cfg.band);
        } catch (const std::runtime_error& e) {
            throw ConfigError(e.what());
        }
        if (snap.model.system != spec.system)
            throw ConfigError(std::string("snapshot model ") + system_name(snap.model.system) +
                              " does not match model.system " + system_name(spec.system));
        if (snap.model.alpha != spec.alpha || snap.model.beta != spec.beta || snap.model.eps != spec.eps)
            throw ConfigError("snapshot alpha/beta/eps differ from the configured model");
        if (!(snap.state.b.grid() == g)) throw ConfigError("snapshot grid does not match grid.dim/grid.n/grid.band");
        return snap.state;
    }
    if (in.type == "analytic") {
        s.b = analytic_field(in.name, g);
        if (spec.has_velocity()) s.u = VectorField(g, FieldKind::velocity);
        return s;
    }
    if (in.band > g.band_limit) throw ConfigError("initial.band exceeds the grid band");
    s.b = random_divfree(g, cfg.seed, in.band, in.slope);
    normalize_h3(s.b, in.h3_norm);
    if (spec.has_velocity()) {
        VectorField u = random_divfree(g, cfg.seed + 1, in.band, in.slope);
        u.kind = FieldKind::velocity;
        normalize_h3(u, in.h3_norm);
        u *= in.u_scale;
        s.u = u;
    }
    return s;
}

std::string csv_header(const DiagnosticsOptions& opt)
{
    std::string h = "t,step,dt,l2_b,l2_u";
    for (double s : opt.sobolev_s) {
        char buf[32];
        std::snprintf(buf, sizeof buf, ",h%g_b", s);
        h += buf;
    }
    h += ",dissipation_h,dissipation_v,energy,dissipated,energy_defect,div_b_h,div_u,u_h_lp_r,grad2_b_h_lp_r,"
         "j_linf2_bmo_surrogate,z3_residual,linf_j";
    return h;
}

std::string csv_row(const DiagnosticsRecord& r)
{
    std::string row = fmt(r.t) + "," + std::to_string(r.step) + "," + fmt(r.dt) + "," + fmt(r.l2_b) + "," + fmt(r.l2_u);
    for (const auto& [s, v] : r.hs_norms) row += "," + fmt(v);
    for (double v : {r.dissipation_h, r.dissipation_v, r.energy, r.dissipated, r.energy_defect, r.div_b_h, r.div_u,
                     r.criterion.u_h_lp, r.criterion.grad2_b_h_lp, r.criterion.j_linf2, r.z3_residual, r.linf_j})
        row += "," + fmt(v);
    return row;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log)
{
    SimState init;
    const ModelSpec& spec = cfg.model;
    try {
        validate(cfg);
        if (cfg.dim != 2) throw ConfigError("simulate supports 2-D grids only (grid.dim = 2)");
        init = initial_state(cfg, spec);
        ensure_dir(cfg.output.dir);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config_error;
    }
    const fs::path dir(cfg.output.dir);
    std::ofstream csv;
    if (cfg.output.wants("csv")) {
        csv.open(dir / "diagnostics.csv", std::ios::trunc);
        if (!csv) {
            log << "config error: cannot write " << (dir / "diagnostics.csv").string() << '\n';
            return exit_config_error;
        }
        csv << csv_header(cfg.diagnostics) << '\n';
    }
    const bool snapshots = cfg.output.wants("snapshot");
    const double e0 = energy(init);
    const double h3_0 = sobolev_norm(init.b, 3.0);
    std::vector<DiagnosticsRecord> history;
    double max_h3 = h3_0;

    auto sink = [&](const SimState& s) {
        DiagnosticsRecord r = compute_record(spec, s, e0, cfg.diagnostics);
        max_h3 = std::max(max_h3, sobolev_norm(s.b, 3.0));
        if (csv.is_open()) csv << csv_row(r) << '\n' << std::flush;
        history.push_back(std::move(r));
    };
    auto on_step = [&](const SimState& s) {
        if (snapshots && cfg.output.stride > 0 && s.step_count % cfg.output.stride == 0) {
            char name[48];
            std::snprintf(name, sizeof name, "snapshot_%08ld.bin", s.step_count);
            write_snapshot((dir / name).string(), spec, s);
        }
    };

    SimResult res = simulate(spec, init, cfg.stepper, sink, on_step);
    const double budget = energy_budget(history);
    json summary{{"system", system_name(spec.system)},
                 {"alpha", spec.alpha},
                 {"beta", spec.beta},
                 {"eps", spec.eps},
                 {"outside_theorem_range", spec.outside_theorem_range()},
                 {"t", res.state.t},
                 {"steps", res.state.step_count},
                 {"blew_up", res.blew_up},
                 {"energy_defect", budget},
                 {"h3_initial", h3_0},
                 {"h3_max", max_h3}};
    if (res.blew_up) {
        summary["blowup_time"] = res.blowup_time;
        summary["message"] = res.message;
    }
    if (snapshots) write_snapshot((dir / (res.blew_up ? "last_good.bin" : "final.bin")).string(), spec, res.state);
    if (cfg.output.wants("json")) write_json((dir / "summary.json").string(), summary);

    if (res.blew_up) {
        log << "blow-up: " << res.message << "; last good state at t = " << fmt(res.state.t) << '\n';
        return exit_blowup;
    }
    log << "reached t = " << fmt(res.state.t) << " in " << res.state.step_count << " steps; energy defect "
        << fmt(budget) << "; max H3 / initial H3 " << fmt(h3_0 > 0.0 ? max_h3 / h3_0 : 0.0) << '\n';
    return exit_ok;
}

int cmd_scaling_test(const RunConfig& cfg, std::ostream& log)
{
    ScalingReport rep;
    try {
        validate(cfg);
        if (cfg.dim != 2) throw ConfigError("scaling-test supports 2-D grids only (grid.dim = 2)");
        const Grid g = cfg.grid();
        VectorField b0 = random_divfree(g, cfg.seed, cfg.scaling.band, cfg.initial.slope);
        normalize_h3(b0, cfg.initial.h3_norm);
        StepperConfig sc = cfg.stepper;
        sc.dt = cfg.scaling.dt;
        sc.adaptive = false;
        try {
            rep = scaling_test(cfg.scaling.beta, cfg.scaling.lambda, b0, cfg.scaling.T, sc, cfg.scaling.checkpoints,
                               cfg.model.eps);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const BlowupError& e) {
        log << "blow-up during scaling test: " << e.what() << '\n';
        return exit_check_failed;
    }
    const bool pass = rep.mismatch <= cfg.scaling.tol;
    if (cfg.output.wants("json")) {
        try {
            ensure_dir(cfg.output.dir);
            write_json((fs::path(cfg.output.dir) / "scaling_report.json").string(),
                       {{"lambda", rep.lambda},
                        {"beta", rep.beta},
                        {"T", rep.T},
                        {"dt", rep.dt},
                        {"checkpoints", rep.checkpoints},
                        {"mismatch", rep.mismatch},
                        {"tol", cfg.scaling.tol},
                        {"pass", pass},
                        {"l2_ratio_torus", rep.l2_ratio_torus},
                        {"l2_prefactor", rep.l2_prefactor},
                        {"expected_prefactor", rep.expected_prefactor}});
        } catch (const std::exception& e) {
            log << "error: " << e.what() << '\n';
            return exit_config_error;
        }
    }
    log << "mismatch " << fmt(rep.mismatch) << " (tol " << fmt(cfg.scaling.tol) << "); L2 prefactor "
        << fmt(rep.l2_prefactor) << " vs " << fmt(rep.expected_prefactor) << '\n';
    log << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? exit_ok : exit_check_failed;
}

}
