#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hmhd/commands.hpp"
#include "hmhd/snapshot.hpp"

using namespace hmhd;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("hmhd_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args)
{
    std::string cmd = std::string(HMHD_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

RunConfig small_sim(const fs::path& dir)
{
    RunConfig cfg;
    cfg.n = 32;
    cfg.initial.band = 5;
    cfg.stepper.t_end = 0.1;
    cfg.stepper.dt = 2e-3;
    cfg.output.dir = dir.string();
    return cfg;
}

}

TEST_CASE("config text round trip")
{
    RunConfig cfg;
    cfg.model.system = System::hallmhd_mixed;
    cfg.model.alpha = 0.7123456789012345;
    cfg.n = 128;
    cfg.seed = 99;
    cfg.initial.type = "analytic";
    cfg.initial.name = "b3_sin_x1";
    cfg.stepper.scheme = Scheme::if_rk2;
    cfg.stepper.adaptive = true;
    cfg.output.formats = {"csv"};
    cfg.verify.dims = {3};
    cfg.diagnostics.sobolev_s = {0.5, 1.5};
    cfg.scaling.tol = 1e-300;
    RunConfig back = parse_config(to_text(cfg));
    CHECK(back == cfg);
    CHECK(parse_config(to_text(RunConfig{})) == RunConfig{});
    for (const auto& k : config_keys()) {
        CHECK_FALSE(k.doc.empty());
        CHECK_NOTHROW(get_value(cfg, k.name));
    }
}

TEST_CASE("config errors name the offending key")
{
    try {
        parse_config("model.alpha = 0.6\nmodel.alhpa = 0.7\n");
        FAIL("accepted an unknown key");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("model.alhpa") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("grid.n = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("no equals sign\n"), ConfigError);
    CHECK(parse_config("# comment\n\n  seed = 4   # trailing\n").seed == 4);
    RunConfig cfg;
    cfg.n = 48;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.initial.type = "file";
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    CHECK_THROWS_AS(set_value(cfg, "model.system", "mhd"), ConfigError);
}

TEST_CASE("snapshot round trip is bit-exact")
{
    auto dir = scratch("snap");
    for (System sys : {System::electron_general, System::hallmhd_classical}) {
        ModelSpec spec;
        spec.system = sys;
        spec.alpha = 0.77;
        spec.beta = 1.25;
        spec.eps = 0.5;
        Grid g = Grid::make(2, 16);
        SimState s;
        s.t = 0.123456789;
        s.b = random_divfree(g, 1, 7);
        if (spec.has_velocity()) s.u = random_divfree(g, 2, 7);
        auto path = (dir / "s.bin").string();
        write_snapshot(path, spec, s);
        Snapshot r = read_snapshot(path);
        CHECK(r.model.system == sys);
        CHECK(r.model.alpha == spec.alpha);
        CHECK(r.model.beta == spec.beta);
        CHECK(r.model.eps == spec.eps);
        CHECK(r.state.t == s.t);
        for (int c = 0; c < 3; ++c) {
            CHECK(r.state.b[c].coeffs() == s.b[c].coeffs());
            if (s.u) CHECK((*r.state.u)[c].coeffs() == (*s.u)[c].coeffs());
        }
        CHECK(r.state.u.has_value() == s.u.has_value());
        std::string bytes = slurp(path);
        CHECK(bytes.substr(0, 4) == "HMHD");
        CHECK(bytes.size() == 4 + 4 + 4 + 4 * std::size_t(g.dim) + 4 + 8 * 4 + std::size_t(s.u ? 6 : 3) * g.size() * 16);
    }
}

TEST_CASE("malformed snapshots are rejected")
{
    auto dir = scratch("badsnap");
    Grid g = Grid::make(2, 8);
    SimState s;
    s.b = random_divfree(g, 1, 3);
    auto path = (dir / "s.bin").string();
    write_snapshot(path, ModelSpec{}, s);
    std::string good = slurp(path);
    auto write = [&](const std::string& bytes) {
        std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;
    };
    write(good.substr(0, good.size() - 8));
    CHECK_THROWS_AS(read_snapshot(path), std::runtime_error);
    write(good + "x");
    CHECK_THROWS_AS(read_snapshot(path), std::runtime_error);
    std::string bad = good;
    bad[0] = 'X';
    write(bad);
    CHECK_THROWS_AS(read_snapshot(path), std::runtime_error);
    bad = good;
    bad[4] = 9;
    write(bad);
    CHECK_THROWS_AS(read_snapshot(path), std::runtime_error);
    CHECK_THROWS_AS(read_snapshot((dir / "missing.bin").string()), std::runtime_error);
}

TEST_CASE("CSV header names every record field")
{
    DiagnosticsOptions opt;
    std::string h = csv_header(opt);
    for (const char* col : {"t", "step", "dt", "l2_b", "l2_u", "h1_b", "h2_b", "h3_b", "dissipation_h",
                            "dissipation_v", "energy", "dissipated", "energy_defect", "div_b_h", "div_u",
                            "u_h_lp_r", "grad2_b_h_lp_r", "j_linf2_bmo_surrogate", "z3_residual", "linf_j"})
        CHECK(("," + h + ",").find("," + std::string(col) + ",") != std::string::npos);
    DiagnosticsRecord r;
    r.hs_norms = {{1, 0}, {2, 0}, {3, 0}};
    auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    CHECK(commas(csv_row(r)) == commas(h));
}

TEST_CASE("simulate writes outputs and resumes bit-compatibly")
{
    auto dir = scratch("sim");
    RunConfig cfg = small_sim(dir / "full");
    cfg.output.stride = 25;
    std::ostringstream log;
    REQUIRE(cmd_simulate(cfg, log) == exit_ok);
    auto full = dir / "full";
    CHECK(fs::exists(full / "diagnostics.csv"));
    CHECK(fs::exists(full / "summary.json"));
    CHECK(fs::exists(full / "snapshot_00000025.bin"));
    CHECK(fs::exists(full / "final.bin"));
    auto summary = nlohmann::json::parse(slurp(full / "summary.json"));
    CHECK(summary["energy_defect"].get<double>() < 1e-6);
    CHECK(summary["steps"].get<long>() == 50);

    RunConfig resume = small_sim(dir / "resumed");
    resume.initial.type = "snapshot";
    resume.initial.path = (full / "snapshot_00000025.bin").string();
    REQUIRE(cmd_simulate(resume, log) == exit_ok);
    Snapshot a = read_snapshot((full / "final.bin").string());
    Snapshot b = read_snapshot((dir / "resumed" / "final.bin").string());
    CHECK(a.state.t == b.state.t);
    CHECK(l2_norm(a.state.b - b.state.b) <= 1e-12 * l2_norm(a.state.b));

    RunConfig wrong = resume;
    wrong.model.system = System::electron_general;
    CHECK(cmd_simulate(wrong, log) == exit_config_error);
    wrong = resume;
    wrong.model.alpha = 0.7;
    CHECK(cmd_simulate(wrong, log) == exit_config_error);
}

TEST_CASE("Hall-MHD simulate from analytic data")
{
    auto dir = scratch("hall");
    RunConfig cfg = small_sim(dir);
    cfg.model.system = System::hallmhd_mixed;
    cfg.initial.type = "analytic";
    cfg.initial.name = "b2_sin_x1";
    cfg.output.formats = {"json"};
    std::ostringstream log;
    CHECK(cmd_simulate(cfg, log) == exit_ok);
    CHECK_FALSE(fs::exists(dir / "diagnostics.csv"));
    cfg.initial.name = "vortex";
    CHECK(cmd_simulate(cfg, log) == exit_config_error);
}

TEST_CASE("blow-up keeps partial outputs and the last good state")
{
    auto dir = scratch("blowup");
    RunConfig cfg = small_sim(dir);
    cfg.n = 64;
    cfg.initial.band = 8;
    cfg.initial.h3_norm = 100.0;
    cfg.stepper.dt = 0.1;
    cfg.stepper.t_end = 1.0;
    std::ostringstream log;
    CHECK(cmd_simulate(cfg, log) == exit_blowup);
    CHECK(fs::exists(dir / "last_good.bin"));
    CHECK_FALSE(fs::exists(dir / "final.bin"));
    CHECK(fs::file_size(dir / "diagnostics.csv") > 0);
    auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["blew_up"].get<bool>());
    Snapshot s = read_snapshot((dir / "last_good.bin").string());
    CHECK(std::isfinite(sobolev_norm(s.state.b, 3.0)));
}

TEST_CASE("verify reports checks and names an injected fault")
{
    auto dir = scratch("verify");
    RunConfig cfg;
    cfg.output.dir = dir.string();
    cfg.verify.n_2d = 32;
    cfg.verify.band_2d = 8;
    cfg.verify.seeds_2d = 2;
    cfg.verify.n_3d = 16;
    cfg.verify.band_3d = 4;
    cfg.verify.seeds_3d = 1;
    cfg.verify.ratio_samples = 3;
    std::ostringstream log;
    REQUIRE(cmd_verify(cfg, log) == exit_ok);
    auto report = nlohmann::json::parse(slurp(dir / "verify_report.json"));
    CHECK(report["checks"].size() >= 60);
    CHECK(report["summary"]["all_pass"].get<bool>());
    CHECK(report["ratio_studies"].size() == 5);

    cfg.verify.inject_fault = "II_{2,5,5}";
    cfg.verify.dims = {2};
    std::ostringstream flog;
    CHECK(cmd_verify(cfg, flog) == exit_check_failed);
    CHECK(flog.str().find("II_{2,5,5}") != std::string::npos);

    cfg.verify.inject_fault = "II_{9,9,9}";
    CHECK(cmd_verify(cfg, flog) == exit_config_error);
}

TEST_CASE("verification is independent of the worker count")
{
    RunConfig cfg;
    cfg.verify.dims = {2};
    cfg.verify.n_2d = 16;
    cfg.verify.band_2d = 4;
    cfg.verify.seeds_2d = 3;
    cfg.verify.ratio_samples = 2;
    auto a = run_verification(cfg, 1);
    auto b = run_verification(cfg, 3);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].check.name == b.entries[i].check.name);
        CHECK(a.entries[i].check.lhs == b.entries[i].check.lhs);
    }
}

TEST_CASE("command-line exit codes")
{
    auto dir = scratch("cli").string();
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("") == exit_config_error);
    CHECK(run_cli("verify --set no.such.key=1") == exit_config_error);
    CHECK(run_cli("verify --config /nonexistent/file.cfg") == exit_config_error);
    CHECK(run_cli("simulate --set grid.dim=3 --out " + dir) == exit_config_error);
    CHECK(run_cli("verify --dim 2 --n 16 --seeds 1 --set verify.band_2d=4 --set verify.ratio_samples=0 --out " + dir) ==
          exit_ok);
    CHECK(run_cli("verify --dim 2 --n 16 --seeds 1 --set verify.band_2d=4 --set verify.ratio_samples=0 "
                  "--inject-fault 'II_{2,5,5}' --out " + dir) == exit_check_failed);
    CHECK(run_cli("scaling-test --set grid.n=32 --set scaling.dt=1e-3 --set scaling.T=0.02 --out " + dir) == exit_ok);
    CHECK(run_cli("scaling-test --set grid.n=32 --set scaling.dt=1e-3 --set scaling.T=0.02 --set scaling.tol=0 --out " +
                  dir) == exit_check_failed);
    CHECK(run_cli("scaling-test --set grid.n=32 --set scaling.beta=1 --set scaling.dt=1e-3 --set scaling.T=0.02 --out " +
                  dir) == exit_ok);
    CHECK(run_cli("simulate --set grid.n=64 --set stepper.dt=0.1 --set initial.h3_norm=100 --out " + dir) ==
          exit_blowup);
}
