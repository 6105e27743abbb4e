#pragma once

#include "qhe/cli/config.hpp"

#include <vector>

namespace qhe::cli {

/// Published engine summary at one parameter point. Rabi frequency in units of the
/// reference gamma41 (pump for table 1, control otherwise), omega_m in 2pi x MHz.
struct ReferenceRow {
    int row = 0;
    double omega_m = 0.0;
    double rabi = 0.0;
    double t_max = 0.0;
    double s = 0.0;
    double r = 0.0;
};

struct TableTolerance {
    double t_max = 0.0;
    double s = 0.0;
    double r = 0.0;
};

/// Rows of table 1 (HE_pu), 2 (HE_c) or 3 (HE_puc). Throws ConfigError otherwise.
const std::vector<ReferenceRow>& reference_table(int id);
TableTolerance table_tolerance(int id);

/// Engine parameters of a reference row: the config's reservoirs and decays, zero pump and
/// control detunings, epsilon = 0.01 and the row's field strength and mirror frequency.
EngineParams table_params(const RunConfig& cfg, int id, const ReferenceRow& ref);

struct TableRowResult {
    ReferenceRow ref;
    EngineReport computed;
    double t_max_err = 0.0;  // relative
    double s_err = 0.0;
    double r_err = 0.0;
    bool pass = false;
};

struct TableResult {
    int id = 0;
    std::vector<TableRowResult> rows;
    /// Table 2: T_max decreasing with omega_m at every fixed Omega_c > 0.
    /// Table 3: T_max increasing with omega_m at every fixed Omega_c >= 0.5 gamma41.
    bool ordering_ok = true;
    bool all_rows_pass() const;
};

TableResult compute_table(const RunConfig& cfg, int id);

}  // namespace qhe::cli
