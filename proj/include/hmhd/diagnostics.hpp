#pragma once

#include <utility>
#include <vector>

#include "hmhd/evolve.hpp"

namespace hmhd {

struct DiagnosticsOptions {
    std::vector<double> sobolev_s{1.0, 2.0, 3.0};
    double p1 = 6.0, r1 = 4.0;
    double p2 = 2.0, r2 = 4.0;
    bool operator==(const DiagnosticsOptions&) const = default;
};

struct CriterionSurrogates {
    double u_h_lp = 0.0;       // ||u_h||_{L^p1}^r1
    double grad2_b_h_lp = 0.0;  // ||grad^2 b_h||_{L^p2}^r2
    double j_linf2 = 0.0;      // ||j||_{L^inf}^2, surrogate for the BMO norm
};

struct DiagnosticsRecord {
    double t = 0.0;
    long step = 0;
    double dt = 0.0;
    double l2_b = 0.0;
    double l2_u = 0.0;
    std::vector<std::pair<double, double>> hs_norms;  // (s, ||b||_{H^s})
    double dissipation_h = 0.0;  // sum over b1, b2 of eta ||Lambda^{p_c/2} b_c||^2
    double dissipation_v = 0.0;  // eta ||Lambda^{p_3/2} b3||^2
    double energy = 0.0;
    double dissipated = 0.0;
    double energy_defect = 0.0;
    double div_b_h = 0.0;  // relative divergence residuals
    double div_u = 0.0;
    CriterionSurrogates criterion;
    double z3_residual = 0.0;  // 0 unless the model is hallmhd_mixed
    double linf_j = 0.0;
};

// e0 is the energy at the start of the run.
DiagnosticsRecord compute_record(const ModelSpec& spec, const SimState& s, double e0,
                                 const DiagnosticsOptions& opt = {});

// max over records of |E + dissipated - E0| / E0 with E0 from the first record; 0 when E0 = 0.
double energy_budget(const std::vector<DiagnosticsRecord>& history);

// Warns when 3/p1 + 2/r1 > 1 or 3/p2 + 2/r2 > 2.
CriterionSurrogates criterion_surrogates(const SimState& s, double p1 = 6.0, double r1 = 4.0, double p2 = 2.0,
                                         double r2 = 4.0);

// Relative L2 gap between d/dt z3 assembled from the vorticity and b3 equations and from the closed
// z3 equation, z3 = w3 + b3. The two agree for eps = nu = eta = 1. Requires a 2-D grid.
double z3_residual(const VectorField& u, const VectorField& b, const ModelSpec& spec);

struct ScalingReport {
    int lambda = 2;
    double beta = 1.5;
    double T = 0.0;
    double dt = 0.0;
    int checkpoints = 0;
    // sup over checkpoints of ||lambda^{2beta-2} b(t, lambda .) - b_lambda(t / lambda^{2beta})|| / ||b_lambda||
    double mismatch = 0.0;
    double l2_ratio_torus = 0.0;  // ||b0_lambda||^2 / ||b0||^2 over the torus
    double l2_prefactor = 0.0;    // the same ratio per rescaled period cell
    double expected_prefactor = 0.0;
};

// electron_general scaling comparison on b0's grid. Throws std::invalid_argument when lambda < 2 or
// the band of b0 exceeds N / (4 lambda).
ScalingReport scaling_test(double beta, int lambda, const VectorField& b0, double T, const StepperConfig& cfg,
                           int checkpoints = 10, double eps = 1.0);

}
