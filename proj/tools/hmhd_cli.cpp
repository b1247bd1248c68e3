#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmhd/commands.hpp"
#include "hmhd/config.hpp"

namespace {

std::string key_listing()
{
    std::string out = "\nConfiguration keys (config file lines `key = value`, or --set key=value):\n";
    std::size_t width = 0;
    for (const auto& k : hmhd::config_keys()) width = std::max(width, k.name.size());
    for (const auto& k : hmhd::config_keys())
        out += "  " + k.name + std::string(width + 2 - k.name.size(), ' ') + k.doc + "\n";
    out += "\nExit codes: 0 success, 1 failed check, 2 blow-up, 3 configuration error.\n"
           "HMHD_THREADS caps the number of verify worker threads.\n";
    return out;
}

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("-c,--config", c.config, "Configuration file");
    sub->add_option("-s,--set", c.sets, "Override a key, e.g. --set model.alpha=0.7 (repeatable)");
    sub->add_option("-o,--out", c.out, "Output directory (output.dir)");
}

hmhd::RunConfig build_config(const Common& c)
{
    hmhd::RunConfig cfg;
    if (!c.config.empty()) cfg = hmhd::load_config(c.config);
    for (const auto& s : c.sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw hmhd::ConfigError("--set expects key=value, got '" + s + "'");
        auto trim = [](std::string v) {
            v.erase(0, v.find_first_not_of(" \t"));
            v.erase(v.find_last_not_of(" \t") + 1);
            return v;
        };
        hmhd::set_value(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    if (!c.out.empty()) cfg.output.dir = c.out;
    return cfg;
}

}

int main(int argc, char** argv)
{
    CLI::App app{"Pseudo-spectral Hall-MHD laboratory: identity verification, simulation and scaling checks"};
    app.require_subcommand(1);
    app.footer(key_listing());

    Common verify_opts, sim_opts, scaling_opts;
    int dim = 0, n = 0, seeds = 0;
    std::string fault;

    auto* verify = app.add_subcommand("verify", "Run the cancellation-identity suite and ratio studies");
    add_common(verify, verify_opts);
    verify->add_option("--dim", dim, "Restrict to one dimension (2 or 3)")->check(CLI::IsMember({2, 3}));
    verify->add_option("--n", n, "Grid points per axis for the selected dimension");
    verify->add_option("--seeds", seeds, "Number of seeds for the selected dimension(s)");
    verify->add_option("--inject-fault", fault, "Negate one ledger label (test hook), e.g. II_{2,5,5}");

    auto* simulate = app.add_subcommand("simulate", "Integrate a 2-D model and write diagnostics");
    add_common(simulate, sim_opts);

    auto* scaling = app.add_subcommand("scaling-test", "Compare a trajectory with its rescaled counterpart");
    add_common(scaling, scaling_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : hmhd::exit_config_error;
    }

    try {
        if (*verify) {
            hmhd::RunConfig cfg = build_config(verify_opts);
            if (dim != 0) cfg.verify.dims = {dim};
            if (n != 0)
                for (int d : cfg.verify.dims) (d == 2 ? cfg.verify.n_2d : cfg.verify.n_3d) = n;
            if (seeds != 0)
                for (int d : cfg.verify.dims) (d == 2 ? cfg.verify.seeds_2d : cfg.verify.seeds_3d) = seeds;
            if (!fault.empty()) cfg.verify.inject_fault = fault;
            return hmhd::cmd_verify(cfg, std::cout);
        }
        if (*simulate) return hmhd::cmd_simulate(build_config(sim_opts), std::cout);
        return hmhd::cmd_scaling_test(build_config(scaling_opts), std::cout);
    } catch (const hmhd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return hmhd::exit_config_error;
    }
}
