#pragma once

#include "qhe/closed_form.hpp"
#include "qhe/engine.hpp"
#include "qhe/observables.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qhe::cli {

enum class MethodChoice { ClosedForm, Floquet, Both };

std::string_view to_string(MethodChoice m);
MethodChoice parse_method(std::string_view text);

struct RunConfig {
    EngineParams params = EngineParams::defaults(EngineVariant::HE_puc);
    GridSpec grid;
    MethodChoice method = MethodChoice::ClosedForm;
    HarmonicsModel model = HarmonicsModel::Perturbative;
    std::string output;  // empty: standard output
    int harmonics = 2;

    /// Throws ConfigError naming the config key.
    void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Missing keys take the reference
/// operating point of the selected variant. Frequencies are in 2pi x MHz except the
/// `omega_4i_rad_s` transition frequencies. Throws ConfigError naming the key.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_text(std::string_view text);
RunConfig load_config(const std::string& path);

/// Effective configuration in the same format, every key present.
std::string serialize(const RunConfig& cfg);

/// "min:max:points"
GridSpec parse_grid(std::string_view text);

/// Config key matching a field name carried by a core ConfigError ("T41" -> "t41").
std::string config_key(std::string_view field);

/// 9 significant digits, lowercase exponent.
std::string format_number(double x);

}  // namespace qhe::cli
