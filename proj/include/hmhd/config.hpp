#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmhd/diagnostics.hpp"
#include "hmhd/evolve.hpp"

namespace hmhd {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InitialSpec {
    std::string type = "random";  // random | snapshot | analytic
    std::string path;
    std::string name;  // analytic field name
    int band = 8;
    double slope = 2.0;
    double h3_norm = 1.0;  // 0 keeps the raw amplitude
    double u_scale = 1.0;
    bool operator==(const InitialSpec&) const = default;
};

struct OutputSpec {
    std::string dir = "hmhd_out";
    int stride = 0;  // snapshot every stride steps; 0 writes the final snapshot only
    std::vector<std::string> formats{"csv", "snapshot", "json"};
    bool operator==(const OutputSpec&) const = default;
    bool wants(const std::string& f) const;
};

struct VerifySpec {
    std::vector<int> dims{2, 3};
    int n_2d = 64, band_2d = 10, seeds_2d = 10;
    int n_3d = 32, band_3d = 5, seeds_3d = 5;
    int ratio_samples = 100;
    std::string inject_fault;
    std::string report = "verify_report.json";
    bool operator==(const VerifySpec&) const = default;
};

struct ScalingSpec {
    int lambda = 2;
    double beta = 1.5;
    double T = 0.1;
    double dt = 1e-4;
    double tol = 1e-6;
    int band = 4;
    int checkpoints = 10;
    bool operator==(const ScalingSpec&) const = default;
};

struct RunConfig {
    ModelSpec model;
    int dim = 2;
    int n = 64;
    int band = -1;
    std::uint64_t seed = 1;
    InitialSpec initial;
    StepperConfig stepper;
    OutputSpec output;
    VerifySpec verify;
    ScalingSpec scaling;
    DiagnosticsOptions diagnostics;
    bool operator==(const RunConfig&) const = default;

    Grid grid() const;
};

struct ConfigKey {
    std::string name;
    std::string doc;
};

// Every accepted key with its description, in file order.
const std::vector<ConfigKey>& config_keys();

// `key = value` lines, `#` comments. Throws ConfigError naming the offending key or line.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
std::string to_text(const RunConfig& cfg);
// Applies one `key=value` assignment.
void set_value(RunConfig& cfg, const std::string& key, const std::string& value);
std::string get_value(const RunConfig& cfg, const std::string& key);
// Range checks across keys; throws ConfigError.
void validate(const RunConfig& cfg);

}
