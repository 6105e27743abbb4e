#pragma once

#include "qhe/cli/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qhe::cli {

enum ExitCode : int {
    kSuccess = 0,
    kConfigFailure = 1,
    kNumericalFailure = 2,
    kAcceptanceFailure = 3,
};

/// CSV spectrum; `both` writes paired `_cf` / `_fl` columns.
int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& log);
/// Computed vs reference rows of a table with relative errors.
int cmd_table(const RunConfig& cfg, int table_id, std::ostream& out, std::ostream& log);
/// Modulated emission amplitude and phase over the grid.
int cmd_modulation(const RunConfig& cfg, std::ostream& out, std::ostream& log);
/// Invariant report, one line per check.
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& log);
/// Entropy bounds and the engine's entropy flow.
int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& log);

struct InvariantCheck {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<std::string> warnings;
    std::vector<InvariantCheck> checks;
    bool all_pass() const;
};

VerifyReport verify(const RunConfig& cfg);

}  // namespace qhe::cli
