#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "hmhd/fields.hpp"

namespace hmhd {

enum class System { electron_aniso, electron_general, hallmhd_mixed, hallmhd_classical };

const char* system_name(System s);
// Throws std::invalid_argument for unknown names.
System parse_system(const std::string& name);

struct ModelSpec {
    System system = System::electron_aniso;
    double eps = 1.0;   // Hall coefficient
    double beta = 1.5;  // electron_general diffusion exponent
    double alpha = 0.6;
    double nu = 1.0;    // velocity diffusion coefficient
    double eta = 1.0;   // magnetic diffusion coefficient

    bool has_velocity() const;
    // Exponents p_c of |xi|^{p_c} per component.
    std::array<double, 3> b_exponents() const;
    std::array<double, 3> u_exponents() const;
    // alpha outside (1/2, 1) for the systems whose theorems assume it.
    bool outside_theorem_range() const;
    bool operator==(const ModelSpec&) const = default;
};

struct SimState {
    double t = 0.0;
    VectorField b;
    std::optional<VectorField> u;
    long step_count = 0;
    double last_dt = 0.0;
    // Time integral of the dissipation rate since the start of the run.
    double dissipated = 0.0;
};

enum class Scheme { if_rk4, if_rk2 };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct StepperConfig {
    double dt = 1e-3;
    bool adaptive = false;
    double cfl = 0.25;
    Scheme scheme = Scheme::if_rk4;
    double t_end = 1.0;
    int diagnostics_stride = 10;
    double h3_ceiling = 1e6;
    // Test hook: drops the nonlinear terms.
    bool nonlinear = true;

    // Throws std::invalid_argument on dt <= 0, cfl outside (0, 1], t_end < 0 or stride < 1.
    void validate() const;
    bool operator==(const StepperConfig&) const = default;
};

struct Rhs {
    VectorField db;
    std::optional<VectorField> du;
};

// Nonlinear part only; diffusion is handled by the integrating factor.
Rhs rhs(const ModelSpec& spec, const SimState& state);

// Total dissipation rate sum_c coef_c ||Lambda^{p_c/2} f_c||^2 of b (and u).
double dissipation_rate(const ModelSpec& spec, const VectorField& b, const std::optional<VectorField>& u);
double energy(const SimState& s);

class BlowupError : public std::runtime_error {
public:
    BlowupError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    double time() const { return t_; }

private:
    double t_;
};

// One integrating-factor Runge-Kutta step of size dt. Throws BlowupError on non-finite values or an
// H3 norm above cfg.h3_ceiling.
SimState step(const ModelSpec& spec, const SimState& state, const StepperConfig& cfg, double dt);
SimState step(const ModelSpec& spec, const SimState& state, const StepperConfig& cfg);

// Heuristic limit: cfl / (max|grad b| K^2) for the Hall wave, cfl / (max|u| K) for advection,
// capped at cfg.dt.
double stable_dt(const ModelSpec& spec, const SimState& state, const StepperConfig& cfg);

using DiagnosticsSink = std::function<void(const SimState&)>;

struct SimResult {
    SimState state;  // last good state
    bool blew_up = false;
    double blowup_time = 0.0;
    std::string message;
};

using StepObserver = std::function<void(const SimState&)>;

// Advances to cfg.t_end; the sink sees the initial state, every diagnostics_stride-th step and the
// final state. on_step sees every accepted step.
SimResult simulate(const ModelSpec& spec, const SimState& initial, const StepperConfig& cfg,
                   const DiagnosticsSink& sink = {}, const StepObserver& on_step = {});

}
