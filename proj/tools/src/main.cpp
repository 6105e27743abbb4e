#include "qhe/cli/commands.hpp"
#include "qhe/cli/config.hpp"
#include "qhe/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace qhe;
using namespace qhe::cli;

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::string method;
    std::string grid;
    int harmonics = -1;
    int table_id = 1;
    bool print_config = false;
};

RunConfig effective_config(const Flags& f) {
    RunConfig cfg = f.config.empty() ? parse_config_text("") : load_config(f.config);
    if (!f.method.empty()) cfg.method = parse_method(f.method);
    if (!f.grid.empty()) cfg.grid = parse_grid(f.grid);
    if (f.harmonics >= 0) cfg.harmonics = f.harmonics;
    if (!f.out.empty()) cfg.output = f.out;
    cfg.validate();
    return cfg;
}

template <class Fn>
int run(const Flags& f, Fn&& command) {
    try {
        const RunConfig cfg = effective_config(f);
        if (f.print_config) std::cerr << serialize(cfg);
        if (cfg.output.empty()) return command(cfg, std::cout);
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) throw ConfigError("output", "cannot write '" + cfg.output + "'");
        const int code = command(cfg, file);
        file.close();
        if (!file) throw ConfigError("output", "write to '" + cfg.output + "' failed");
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const VariantError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigFailure;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra and thermodynamics of mirror-modulated tripod heat engines"};
    app.require_subcommand(1);
    Flags f;

    auto common = [&f](CLI::App* sub) {
        sub->add_option("--config", f.config, "key = value configuration file");
        sub->add_option("--out", f.out, "output path (default: stdout)");
        sub->add_option("--method", f.method, "closed-form | floquet | both");
        sub->add_option("--grid", f.grid, "probe detuning grid min:max:points in 2pi x MHz");
        sub->add_option("--harmonics", f.harmonics, "Floquet truncation order L");
        sub->add_flag("--print-config", f.print_config,
                      "write the effective configuration to stderr");
    };

    auto* spectrum = app.add_subcommand("spectrum", "absorption, emission and brightness spectra");
    auto* table = app.add_subcommand("table", "recompute a reference table");
    auto* modulation = app.add_subcommand("modulation", "modulated emission amplitude and phase");
    auto* verify = app.add_subcommand("verify", "invariant report");
    auto* bounds = app.add_subcommand("bounds", "entropy bounds and entropy flow");
    for (CLI::App* s : {spectrum, table, modulation, verify, bounds}) common(s);
    table->add_option("--table-id", f.table_id, "1, 2 or 3")->check(CLI::Range(1, 3));

    CLI11_PARSE(app, argc, argv);

    if (*spectrum)
        return run(f, [](const RunConfig& c, std::ostream& o) { return cmd_spectrum(c, o, std::cerr); });
    if (*table)
        return run(f, [&f](const RunConfig& c, std::ostream& o) {
            return cmd_table(c, f.table_id, o, std::cerr);
        });
    if (*modulation)
        return run(f, [](const RunConfig& c, std::ostream& o) { return cmd_modulation(c, o, std::cerr); });
    if (*verify)
        return run(f, [](const RunConfig& c, std::ostream& o) { return cmd_verify(c, o, std::cerr); });
    return run(f, [](const RunConfig& c, std::ostream& o) { return cmd_bounds(c, o, std::cerr); });
}
