#include "hmhd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace hmhd {

bool OutputSpec::wants(const std::string& f) const
{
    return std::find(formats.begin(), formats.end(), f) != formats.end();
}

Grid RunConfig::grid() const
{
    try {
        return Grid::make(dim, n, band);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
}

namespace {

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& key, const std::string& v)
{
    double x = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("invalid number for '" + key + "': '" + v + "'");
    return x;
}

long long to_int(const std::string& key, const std::string& v)
{
    long long x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("invalid integer for '" + key + "': '" + v + "'");
    return x;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("invalid boolean for '" + key + "': '" + v + "'");
}

struct Binding {
    ConfigKey key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

template <class F>
Binding dbl(const char* name, const char* doc, F field)
{
    return {{name, doc},
            [field](const RunConfig& c) { return fmt(field(c)); },
            [field, name](RunConfig& c, const std::string& v) { field(c) = to_double(name, v); }};
}

template <class F>
Binding integer(const char* name, const char* doc, F field)
{
    return {{name, doc},
            [field](const RunConfig& c) { return std::to_string(field(c)); },
            [field, name](RunConfig& c, const std::string& v) {
                field(c) = static_cast<std::remove_reference_t<decltype(field(c))>>(to_int(name, v));
            }};
}

template <class F>
Binding str(const char* name, const char* doc, F field)
{
    return {{name, doc},
            [field](const RunConfig& c) { return field(c); },
            [field](RunConfig& c, const std::string& v) { field(c) = v; }};
}

std::string join(const std::vector<std::string>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
    return out;
}

const std::vector<Binding>& bindings()
{
    static const std::vector<Binding> b{
        {{"model.system", "electron_aniso | electron_general | hallmhd_mixed | hallmhd_classical"},
         [](const RunConfig& c) { return std::string(system_name(c.model.system)); },
         [](RunConfig& c, const std::string& v) {
             try {
                 c.model.system = parse_system(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(std::string("model.system: ") + e.what());
             }
         }},
        dbl("model.alpha", "fractional exponent alpha (theorems assume 1/2 < alpha < 1)",
            [](auto& c) -> auto& { return c.model.alpha; }),
        dbl("model.beta", "diffusion exponent beta of electron_general", [](auto& c) -> auto& { return c.model.beta; }),
        dbl("model.eps", "Hall coefficient", [](auto& c) -> auto& { return c.model.eps; }),
        dbl("model.nu", "velocity diffusion coefficient", [](auto& c) -> auto& { return c.model.nu; }),
        dbl("model.eta", "magnetic diffusion coefficient", [](auto& c) -> auto& { return c.model.eta; }),
        integer("grid.dim", "2 (2.5-D) or 3", [](auto& c) -> auto& { return c.dim; }),
        integer("grid.n", "points per axis, power of two >= 4", [](auto& c) -> auto& { return c.n; }),
        integer("grid.band", "dealiased band limit K, -1 for n/2 - 1", [](auto& c) -> auto& { return c.band; }),
        {{"seed", "random seed for initial data and verification fields"},
         [](const RunConfig& c) { return std::to_string(c.seed); },
         [](RunConfig& c, const std::string& v) {
             long long x = to_int("seed", v);
             if (x < 0) throw ConfigError("invalid value for 'seed': must be non-negative");
             c.seed = static_cast<std::uint64_t>(x);
         }},
        str("initial.type", "random | snapshot | analytic", [](auto& c) -> auto& { return c.initial.type; }),
        str("initial.path", "snapshot file for initial.type = snapshot",
            [](auto& c) -> auto& { return c.initial.path; }),
        str("initial.name", "analytic field: zero | b3_sin_x1 | b1_sin_x2 | b2_sin_x1",
            [](auto& c) -> auto& { return c.initial.name; }),
        integer("initial.band", "band of random initial data", [](auto& c) -> auto& { return c.initial.band; }),
        dbl("initial.slope", "spectral slope of random initial data (amplitude |xi|^-slope)",
            [](auto& c) -> auto& { return c.initial.slope; }),
        dbl("initial.h3_norm", "H3 norm of random b (and of u before u_scale), 0 keeps the raw amplitude",
            [](auto& c) -> auto& { return c.initial.h3_norm; }),
        dbl("initial.u_scale", "velocity amplitude relative to b for Hall-MHD systems",
            [](auto& c) -> auto& { return c.initial.u_scale; }),
        dbl("stepper.dt", "time step (upper bound when adaptive)", [](auto& c) -> auto& { return c.stepper.dt; }),
        {{"stepper.adaptive", "true: dt from the CFL heuristic, capped at stepper.dt"},
         [](const RunConfig& c) { return std::string(c.stepper.adaptive ? "true" : "false"); },
         [](RunConfig& c, const std::string& v) { c.stepper.adaptive = to_bool("stepper.adaptive", v); }},
        dbl("stepper.cfl", "Courant factor in (0, 1]", [](auto& c) -> auto& { return c.stepper.cfl; }),
        {{"stepper.scheme", "if_rk4 | if_rk2"},
         [](const RunConfig& c) { return std::string(scheme_name(c.stepper.scheme)); },
         [](RunConfig& c, const std::string& v) {
             try {
                 c.stepper.scheme = parse_scheme(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(std::string("stepper.scheme: ") + e.what());
             }
         }},
        dbl("stepper.t_end", "final time", [](auto& c) -> auto& { return c.stepper.t_end; }),
        integer("stepper.diagnostics_stride", "steps between diagnostics records",
                [](auto& c) -> auto& { return c.stepper.diagnostics_stride; }),
        dbl("stepper.h3_ceiling", "blow-up threshold on ||b||_H3", [](auto& c) -> auto& { return c.stepper.h3_ceiling; }),
        str("output.dir", "output directory", [](auto& c) -> auto& { return c.output.dir; }),
        integer("output.stride", "steps between snapshots, 0 for the final snapshot only",
                [](auto& c) -> auto& { return c.output.stride; }),
        {{"output.formats", "comma list of csv, snapshot, json"},
         [](const RunConfig& c) { return join(c.output.formats); },
         [](RunConfig& c, const std::string& v) { c.output.formats = split_list(v); }},
        {{"diagnostics.sobolev", "comma list of s for the ||b||_H^s columns"},
         [](const RunConfig& c) {
             std::vector<std::string> xs;
             for (double s : c.diagnostics.sobolev_s) xs.push_back(fmt(s));
             return join(xs);
         },
         [](RunConfig& c, const std::string& v) {
             c.diagnostics.sobolev_s.clear();
             for (const auto& x : split_list(v)) c.diagnostics.sobolev_s.push_back(to_double("diagnostics.sobolev", x));
         }},
        dbl("diagnostics.p1", "Lebesgue exponent for ||u_h||", [](auto& c) -> auto& { return c.diagnostics.p1; }),
        dbl("diagnostics.r1", "time exponent for ||u_h||", [](auto& c) -> auto& { return c.diagnostics.r1; }),
        dbl("diagnostics.p2", "Lebesgue exponent for ||grad^2 b_h||", [](auto& c) -> auto& { return c.diagnostics.p2; }),
        dbl("diagnostics.r2", "time exponent for ||grad^2 b_h||", [](auto& c) -> auto& { return c.diagnostics.r2; }),
        {{"verify.dims", "comma list of dimensions to verify"},
         [](const RunConfig& c) {
             std::vector<std::string> xs;
             for (int d : c.verify.dims) xs.push_back(std::to_string(d));
             return join(xs);
         },
         [](RunConfig& c, const std::string& v) {
             c.verify.dims.clear();
             for (const auto& x : split_list(v)) c.verify.dims.push_back(int(to_int("verify.dims", x)));
         }},
        integer("verify.n_2d", "2-D verification grid size", [](auto& c) -> auto& { return c.verify.n_2d; }),
        integer("verify.band_2d", "2-D field band", [](auto& c) -> auto& { return c.verify.band_2d; }),
        integer("verify.seeds_2d", "number of 2-D seeds", [](auto& c) -> auto& { return c.verify.seeds_2d; }),
        integer("verify.n_3d", "3-D verification grid size", [](auto& c) -> auto& { return c.verify.n_3d; }),
        integer("verify.band_3d", "3-D field band", [](auto& c) -> auto& { return c.verify.band_3d; }),
        integer("verify.seeds_3d", "number of 3-D seeds", [](auto& c) -> auto& { return c.verify.seeds_3d; }),
        integer("verify.ratio_samples", "fields per bound-functional ratio study, 0 to skip",
                [](auto& c) -> auto& { return c.verify.ratio_samples; }),
        str("verify.inject_fault", "test hook: ledger label whose sign is flipped",
            [](auto& c) -> auto& { return c.verify.inject_fault; }),
        str("verify.report", "JSON report file name inside output.dir",
            [](auto& c) -> auto& { return c.verify.report; }),
        integer("scaling.lambda", "integer scale factor >= 2", [](auto& c) -> auto& { return c.scaling.lambda; }),
        dbl("scaling.beta", "diffusion exponent", [](auto& c) -> auto& { return c.scaling.beta; }),
        dbl("scaling.T", "final time of the unscaled trajectory", [](auto& c) -> auto& { return c.scaling.T; }),
        dbl("scaling.dt", "time step of both trajectories", [](auto& c) -> auto& { return c.scaling.dt; }),
        dbl("scaling.tol", "pass threshold on the relative mismatch", [](auto& c) -> auto& { return c.scaling.tol; }),
        integer("scaling.band", "band of the random initial field, <= n / (4 lambda)",
                [](auto& c) -> auto& { return c.scaling.band; }),
        integer("scaling.checkpoints", "matched comparison times", [](auto& c) -> auto& { return c.scaling.checkpoints; }),
    };
    return b;
}

const Binding& binding(const std::string& key)
{
    for (const auto& b : bindings())
        if (b.key.name == key) return b;
    throw ConfigError("unknown key '" + key + "'");
}

}

const std::vector<ConfigKey>& config_keys()
{
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        for (const auto& b : bindings()) k.push_back(b.key);
        return k;
    }();
    return keys;
}

void set_value(RunConfig& cfg, const std::string& key, const std::string& value)
{
    binding(key).set(cfg, value);
}

std::string get_value(const RunConfig& cfg, const std::string& key) { return binding(key).get(cfg); }

RunConfig parse_config(const std::string& text, RunConfig base)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        set_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::string to_text(const RunConfig& cfg)
{
    std::string out;
    for (const auto& b : bindings()) out += b.key.name + " = " + b.get(cfg) + "\n";
    return out;
}

void validate(const RunConfig& cfg)
{
    if (cfg.dim != 2 && cfg.dim != 3) throw ConfigError("grid.dim must be 2 or 3");
    cfg.grid();
    try {
        cfg.stepper.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto& t = cfg.initial.type;
    if (t != "random" && t != "snapshot" && t != "analytic")
        throw ConfigError("initial.type must be random, snapshot or analytic");
    if (t == "snapshot" && cfg.initial.path.empty()) throw ConfigError("initial.path is required for snapshots");
    if (t == "analytic" && cfg.initial.name.empty()) throw ConfigError("initial.name is required for analytic data");
    if (cfg.initial.band < 1) throw ConfigError("initial.band must be >= 1");
    if (cfg.initial.h3_norm < 0.0) throw ConfigError("initial.h3_norm must be >= 0");
    if (cfg.output.stride < 0) throw ConfigError("output.stride must be >= 0");
    for (const auto& f : cfg.output.formats)
        if (f != "csv" && f != "snapshot" && f != "json") throw ConfigError("output.formats: unknown format '" + f + "'");
    for (int d : cfg.verify.dims)
        if (d != 2 && d != 3) throw ConfigError("verify.dims entries must be 2 or 3");
    if (cfg.verify.seeds_2d < 0 || cfg.verify.seeds_3d < 0 || cfg.verify.ratio_samples < 0)
        throw ConfigError("verify counts must be >= 0");
    if (cfg.scaling.lambda < 2) throw ConfigError("scaling.lambda must be an integer >= 2");
    if (!(cfg.scaling.dt > 0.0)) throw ConfigError("scaling.dt must be positive");
    if (!(cfg.scaling.tol >= 0.0)) throw ConfigError("scaling.tol must be >= 0");
    if (cfg.scaling.checkpoints < 1) throw ConfigError("scaling.checkpoints must be >= 1");
    if (cfg.model.nu < 0.0 || cfg.model.eta < 0.0) throw ConfigError("model.nu and model.eta must be >= 0");
}

}
