#include "qhe/cli/config.hpp"

#include "qhe/errors.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace qhe::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ConfigError(std::string(key), "expected a finite number, got '" + std::string(text) + "'");
    return v;
}

int parse_int(std::string_view key, std::string_view text) {
    int v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
    return v;
}

// "<number>" in 2pi x MHz, or "<number> gamma41" in units of the reference gamma41.
AngularFrequency parse_frequency(std::string_view key, std::string_view text,
                                 AngularFrequency g41) {
    const auto space = text.find_first_of(" \t");
    if (space == std::string_view::npos) return mhz(parse_double(key, text));
    const std::string_view unit = trim(text.substr(space));
    if (unit != "gamma41")
        throw ConfigError(std::string(key), "unknown unit '" + std::string(unit) + "'");
    return parse_double(key, text.substr(0, space)) * g41;
}

std::string full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string_view model_name(HarmonicsModel m) {
    switch (m) {
        case HarmonicsModel::Perturbative: return "perturbative";
        case HarmonicsModel::LiteralNested: return "literal-nested";
        case HarmonicsModel::LiteralSingleF: return "literal-single-f";
    }
    return "perturbative";
}

HarmonicsModel parse_model(std::string_view text) {
    if (text == "perturbative") return HarmonicsModel::Perturbative;
    if (text == "literal-nested") return HarmonicsModel::LiteralNested;
    if (text == "literal-single-f") return HarmonicsModel::LiteralSingleF;
    throw ConfigError("model", "expected perturbative, literal-nested or literal-single-f");
}

const std::map<std::string, std::string, std::less<>>& field_keys() {
    static const std::map<std::string, std::string, std::less<>> m{
        {"T41", "t41"},
        {"T42", "t42"},
        {"T43", "t43"},
        {"Omega_pr", "omega_pr"},
        {"Omega_pu", "omega_pu"},
        {"Omega_c", "omega_c"},
        {"Delta_pr", "delta_pr"},
        {"Delta_pu", "delta_pu"},
        {"Delta_c", "delta_c"},
        {"Gamma41", "gamma_41"},
        {"Gamma42", "gamma_42"},
        {"Gamma43", "gamma_43"},
        {"grid", "grid_points"},
    };
    return m;
}

}  // namespace

std::string_view to_string(MethodChoice m) {
    switch (m) {
        case MethodChoice::ClosedForm: return "closed-form";
        case MethodChoice::Floquet: return "floquet";
        case MethodChoice::Both: return "both";
    }
    return "closed-form";
}

MethodChoice parse_method(std::string_view text) {
    if (text == "closed-form") return MethodChoice::ClosedForm;
    if (text == "floquet") return MethodChoice::Floquet;
    if (text == "both") return MethodChoice::Both;
    throw ConfigError("method", "expected closed-form, floquet or both, got '" + std::string(text) + "'");
}

std::string config_key(std::string_view field) {
    const auto& m = field_keys();
    if (auto it = m.find(field); it != m.end()) return it->second;
    return std::string(field);
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

void RunConfig::validate() const {
    try {
        params.validate();
        if (!std::isfinite(grid.min) || !std::isfinite(grid.max) || !(grid.min < grid.max))
            throw ConfigError("grid_min", "grid_min must be below grid_max");
        grid.validate();
    } catch (const ConfigError& e) {
        const std::string key = config_key(e.field());
        if (key == e.field()) throw;
        throw ConfigError(key, e.what());
    }
    if (harmonics < 0) throw ConfigError("harmonics", "must be >= 0");
    if (harmonics == 0 && params.normalized().epsilon > 0.0)
        throw ConfigError("harmonics", "at least one harmonic is required when epsilon > 0");
}

RunConfig parse_config(std::istream& in) {
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry, std::less<>> entries;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "empty key");
        if (!entries.emplace(key, Entry{value, line_no}).second)
            throw ConfigError(key, "duplicate key on line " + std::to_string(line_no));
    }

    auto take = [&](std::string_view key) -> std::optional<std::string> {
        auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        std::string v = it->second.value;
        entries.erase(it);
        return v;
    };

    EngineVariant variant = EngineVariant::HE_puc;
    if (auto v = take("variant")) variant = parse_variant(*v);

    RunConfig cfg;
    cfg.params = EngineParams::defaults(variant);
    EngineParams& p = cfg.params;

    // Reservoirs and decays first: they set gamma41 for "gamma41" units.
    auto real = [&](std::string_view key, double& dst) {
        if (auto v = take(key)) dst = parse_double(key, *v);
    };
    auto rad_s = [&](std::string_view key, AngularFrequency& dst) {
        if (auto v = take(key)) dst = AngularFrequency::from_rad_s(parse_double(key, *v));
    };
    real("t41", p.reservoirs.T41);
    real("t42", p.reservoirs.T42);
    real("t43", p.reservoirs.T43);
    rad_s("omega_41_rad_s", p.reservoirs.omega41);
    rad_s("omega_42_rad_s", p.reservoirs.omega42);
    rad_s("omega_43_rad_s", p.reservoirs.omega43);
    auto plain = [&](std::string_view key, AngularFrequency& dst) {
        if (auto v = take(key)) dst = mhz(parse_double(key, *v));
    };
    plain("gamma_41", p.decays.Gamma41);
    plain("gamma_42", p.decays.Gamma42);
    plain("gamma_43", p.decays.Gamma43);

    try {
        p.reservoirs.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(config_key(e.field()), e.what());
    }
    const AngularFrequency g41 = reference_gamma41(p.reservoirs, p.decays);
    p.Omega_pr = 0.05 * g41;
    if (variant != EngineVariant::HE_c) p.Omega_pu = g41;
    if (variant != EngineVariant::HE_pu) p.Omega_c = g41;

    auto freq = [&](std::string_view key, AngularFrequency& dst) {
        if (auto v = take(key)) dst = parse_frequency(key, *v, g41);
    };
    freq("omega_pr", p.Omega_pr);
    freq("omega_pu", p.Omega_pu);
    freq("omega_c", p.Omega_c);
    freq("delta_pr", p.Delta_pr);
    freq("delta_pu", p.Delta_pu);
    freq("delta_c", p.Delta_c);
    freq("omega_m", p.omega_m);
    real("epsilon", p.epsilon);

    real("grid_min", cfg.grid.min);
    real("grid_max", cfg.grid.max);
    if (auto v = take("grid_points")) cfg.grid.points = parse_int("grid_points", *v);
    if (auto v = take("method")) cfg.method = parse_method(*v);
    if (auto v = take("model")) cfg.model = parse_model(*v);
    if (auto v = take("output")) cfg.output = *v;
    if (auto v = take("harmonics")) cfg.harmonics = parse_int("harmonics", *v);

    if (!entries.empty()) {
        const auto& [key, e] = *entries.begin();
        throw ConfigError(key, "unknown key on line " + std::to_string(e.line));
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return parse_config(in);
}

std::string serialize(const RunConfig& cfg) {
    const EngineParams& p = cfg.params;
    std::ostringstream o;
    auto f = [&](const char* key, double v) { o << key << " = " << full(v) << '\n'; };
    o << "variant = " << qhe::to_string(p.variant) << '\n';
    f("omega_pr", p.Omega_pr.as_two_pi_mhz());
    f("omega_pu", p.Omega_pu.as_two_pi_mhz());
    f("omega_c", p.Omega_c.as_two_pi_mhz());
    f("delta_pr", p.Delta_pr.as_two_pi_mhz());
    f("delta_pu", p.Delta_pu.as_two_pi_mhz());
    f("delta_c", p.Delta_c.as_two_pi_mhz());
    f("omega_m", p.omega_m.as_two_pi_mhz());
    f("epsilon", p.epsilon);
    f("t41", p.reservoirs.T41);
    f("t42", p.reservoirs.T42);
    f("t43", p.reservoirs.T43);
    f("omega_41_rad_s", p.reservoirs.omega41.rad_s());
    f("omega_42_rad_s", p.reservoirs.omega42.rad_s());
    f("omega_43_rad_s", p.reservoirs.omega43.rad_s());
    f("gamma_41", p.decays.Gamma41.as_two_pi_mhz());
    f("gamma_42", p.decays.Gamma42.as_two_pi_mhz());
    f("gamma_43", p.decays.Gamma43.as_two_pi_mhz());
    f("grid_min", cfg.grid.min);
    f("grid_max", cfg.grid.max);
    o << "grid_points = " << cfg.grid.points << '\n';
    o << "method = " << to_string(cfg.method) << '\n';
    o << "model = " << model_name(cfg.model) << '\n';
    if (!cfg.output.empty()) o << "output = " << cfg.output << '\n';
    o << "harmonics = " << cfg.harmonics << '\n';
    return o.str();
}

GridSpec parse_grid(std::string_view text) {
    GridSpec g;
    const auto a = text.find(':');
    const auto b = a == std::string_view::npos ? a : text.find(':', a + 1);
    if (b == std::string_view::npos) throw ConfigError("grid", "expected min:max:points");
    g.min = parse_double("grid_min", trim(text.substr(0, a)));
    g.max = parse_double("grid_max", trim(text.substr(a + 1, b - a - 1)));
    g.points = parse_int("grid_points", trim(text.substr(b + 1)));
    if (!(g.min < g.max)) throw ConfigError("grid_min", "grid_min must be below grid_max");
    if (g.points < 3) throw ConfigError("grid_points", "requires at least 3 points");
    return g;
}

}  // namespace qhe::cli
