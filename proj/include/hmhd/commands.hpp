#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "hmhd/config.hpp"
#include "hmhd/ledger.hpp"

namespace hmhd {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_blowup = 2,
    exit_config_error = 3,
};

struct VerifyEntry {
    std::string field;  // e.g. "2d/seed=3/solenoidal"
    int dim = 2;
    std::uint64_t seed = 0;
    CancellationCheck check;
    std::vector<std::string> suspects;  // sign-flip suspects for ledger checks
};

struct VerifyOutcome {
    std::vector<VerifyEntry> entries;
    std::vector<RatioStudy> ratios;
    bool all_pass() const;
    const VerifyEntry* first_failure() const;
};

// Runs the identity suite; workers <= 0 reads HMHD_THREADS (default 1).
VerifyOutcome run_verification(const RunConfig& cfg, int workers = 0);

// Number of worker threads from HMHD_THREADS, at least 1.
int worker_count();

// Commands write progress to `log` and files under cfg.output.dir.
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
int cmd_scaling_test(const RunConfig& cfg, std::ostream& log);

// Initial state per cfg.initial; may read a snapshot. Throws ConfigError.
SimState initial_state(const RunConfig& cfg, const ModelSpec& spec);

// Header and one row of the diagnostics CSV.
std::string csv_header(const DiagnosticsOptions& opt);
std::string csv_row(const DiagnosticsRecord& r);

}
