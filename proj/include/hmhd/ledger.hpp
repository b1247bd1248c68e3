#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hmhd/fields.hpp"

namespace hmhd {

struct CancellationCheck {
    std::string name;
    double lhs = 0.0;
    double expected = 0.0;
    double abs_residual = 0.0;
    double scale = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::vector<std::string> labels;
};

struct CancellationReport {
    std::vector<CancellationCheck> checks;

    bool all_pass() const;
    const CancellationCheck* first_failure() const;
    // Largest abs_residual / scale over checks with nonzero scale.
    double worst_ratio() const;
    void append(const CancellationReport& other);
    // Records a check; pass iff |lhs - expected| <= tol * scale.
    void add(std::string name, double lhs, double expected, double scale, double tol,
             std::vector<std::string> labels = {});
};

struct LedgerEntry {
    std::string label;
    double value = 0.0;
    // Largest |integral| among the individual integrals summed into the label.
    double scale = 0.0;
};

struct TermLedger {
    int dim = 2;
    std::uint64_t field_hash = 0;
    std::vector<LedgerEntry> entries;
    // Grouped identities checked while building.
    CancellationReport internal;

    bool has(const std::string& label) const;
    double value(const std::string& label) const;
    double scale(const std::string& label) const;
};

struct LedgerOptions {
    // Test hook: negates the named label after evaluation.
    std::string flip_sign_label;
};

inline constexpr double tol_trilinear = 1e-12;
inline constexpr double tol_fourth_order = 1e-11;

std::uint64_t field_hash(const VectorField& b);

struct PairingForms {
    double curl_form = 0.0;   // int Lap curl(j x b) . Lap b
    double split_form = 0.0;  // sum_{k,l} int d_k^2 (j x b) . d_l^2 j
    double scale = 0.0;       // largest |term| in the split form
};

PairingForms pairing_h2_forms(const VectorField& b);
// Split form; the curl form is checked against it in build_ledger.
double pairing_h2(const VectorField& b);

TermLedger build_ledger(const VectorField& b, const LedgerOptions& opt = {});
// The six pair cancellations that hold for any smooth b.
CancellationReport check_cancellations(const TermLedger& ledger, const VectorField& b);
// Labels of a failing ledger check whose sign flip alone would make it pass.
std::vector<std::string> sign_flip_suspects(const CancellationCheck& check, const TermLedger& ledger);
// Direct pairing against the sum of surviving terms.
CancellationReport check_master_identity(const VectorField& b, const LedgerOptions& opt = {});
CancellationReport check_master_identity(const TermLedger& ledger, const VectorField& b);
enum class ViHypothesis {
    require,          // throw std::invalid_argument unless div b_h = 0 to 1e-12 relative
    when_solenoidal,  // skip the checks that need div b_h = 0 on other fields
    evaluate_all,     // evaluate every check regardless (negative controls)
};
// 2-D grid: the V/VI equalities and their rewrites.
CancellationReport check_25d_vi_cancellations(const VectorField& b, ViHypothesis h = ViHypothesis::require);
// Names of the four V/VI pair equalities that need div b_h = 0.
const std::vector<std::string>& vi_pair_check_names();
// 3-D grid: integration-by-parts rewrites of the groups that contain b3 twice. Rewrites that
// substitute d3 b3 = -d1 b1 - d2 b2 are skipped unless b is solenoidal.
CancellationReport check_3d_rewrites(const VectorField& b);

// int (|grad b_h||grad^3 b_h| + |grad^2 b_h|^2)|grad^2 b_v|, 2-D grid.
double bound_functional_25d(const VectorField& b);

enum class Bound3d {
    general,     // int |grad^2 b_h|(|grad b||grad^3 b| + |grad^2 b_v||grad^2 b|)
    solenoidal,  // int |grad b||grad^2 b_h||grad^3 b_h| + |grad^2 b_v|(|grad^2 b_h|^2 + |grad b_h||grad^3 b_h|)
};
double bound_functional_3d(const VectorField& b, Bound3d variant);

struct H1Pairing {
    double pairing = 0.0;  // int curl(j x b) . Lap b
    double bound = 0.0;    // int |grad b||grad b_h||grad^2 b_h|
    double scale = 0.0;    // ||j x b|| ||Lap j||
};
H1Pairing pairing_h1(const VectorField& b);

struct RatioStudy {
    std::string name;
    int samples = 0;
    double max = 0.0;
    double median = 0.0;
    bool finite = true;
};

enum class RatioSetting { h2_25d, h2_3d_general, h2_3d_solenoidal, h1_25d, h1_3d };
const char* ratio_setting_name(RatioSetting s);
// |pairing| / bound over `samples` random solenoidal fields with seeds first_seed, first_seed+1, ...
RatioStudy ratio_study(RatioSetting s, const Grid& g, int band, int samples, std::uint64_t first_seed);

}
