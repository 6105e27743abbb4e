#include "qhe/cli/commands.hpp"

#include "qhe/cli/tables.hpp"
#include "qhe/errors.hpp"
#include "qhe/floquet.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace qhe::cli {

namespace {

SweepOptions options(const RunConfig& cfg, Method m) {
    SweepOptions o;
    o.method = m;
    o.harmonics = cfg.harmonics;
    o.model = cfg.model;
    return o;
}

std::string phase_over_pi(const std::optional<double>& phase) {
    return phase ? format_number(*phase / std::numbers::pi) : "nan";
}

bool has_numerical_error(const std::vector<SpectrumRow>& rows) {
    return std::any_of(rows.begin(), rows.end(),
                       [](const SpectrumRow& r) { return (r.flags & kNumericalError) != 0; });
}

void report_row_errors(const std::vector<SpectrumRow>& rows, std::ostream& log) {
    for (const SpectrumRow& r : rows)
        if (r.flags & kNumericalError)
            log << "delta_pr = " << format_number(r.delta_pr) << ": " << r.message << '\n';
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    const char* cols[] = {"sigma_abs",          "sigma_em",      "brightness",
                          "brightness_over_n41", "mod_amplitude", "mod_phase_over_pi",
                          "flags"};
    auto fields = [](const SpectrumRow& r) {
        return std::vector<std::string>{format_number(r.sigma_abs),
                                        format_number(r.sigma_em),
                                        format_number(r.brightness),
                                        format_number(r.brightness_over_n41),
                                        format_number(r.mod_amplitude),
                                        phase_over_pi(r.mod_phase),
                                        std::to_string(r.flags)};
    };

    if (cfg.method != MethodChoice::Both) {
        const Method m = cfg.method == MethodChoice::Floquet ? Method::Floquet : Method::ClosedForm;
        const auto rows = sweep_spectrum(cfg.params, cfg.grid, options(cfg, m));
        out << "delta_pr_2pi_mhz";
        for (const char* c : cols) out << ',' << c;
        out << '\n';
        for (const SpectrumRow& r : rows) {
            out << format_number(r.delta_pr);
            for (const std::string& f : fields(r)) out << ',' << f;
            out << '\n';
        }
        report_row_errors(rows, log);
        return has_numerical_error(rows) ? kNumericalFailure : kSuccess;
    }

    const auto cf = sweep_spectrum(cfg.params, cfg.grid, options(cfg, Method::ClosedForm));
    const auto fl = sweep_spectrum(cfg.params, cfg.grid, options(cfg, Method::Floquet));
    out << "delta_pr_2pi_mhz";
    for (const char* c : cols) out << ',' << c << "_cf," << c << "_fl";
    out << '\n';
    double worst = 0.0;
    for (std::size_t i = 0; i < cf.size(); ++i) {
        out << format_number(cf[i].delta_pr);
        const auto a = fields(cf[i]);
        const auto b = fields(fl[i]);
        for (std::size_t k = 0; k < a.size(); ++k) out << ',' << a[k] << ',' << b[k];
        out << '\n';
        worst = std::max(worst, rel_diff(cf[i].brightness, fl[i].brightness));
    }
    log << "max relative brightness difference closed-form vs floquet: " << format_number(worst)
        << '\n';
    report_row_errors(cf, log);
    report_row_errors(fl, log);
    return has_numerical_error(cf) || has_numerical_error(fl) ? kNumericalFailure : kSuccess;
}

int cmd_table(const RunConfig& cfg, int table_id, std::ostream& out, std::ostream& log) {
    const TableResult t = compute_table(cfg, table_id);
    const TableTolerance tol = table_tolerance(table_id);
    out << "row,omega_m_2pi_mhz,rabi_over_gamma41,t_max_over_t0,t_max_ref,t_max_rel_err,"
           "s_over_kb,s_ref,s_rel_err,r,r_ref,r_rel_err,pass\n";
    int passed = 0;
    for (const TableRowResult& r : t.rows) {
        out << r.ref.row << ',' << format_number(r.ref.omega_m) << ',' << format_number(r.ref.rabi)
            << ',' << format_number(r.computed.T_max_over_T0) << ',' << format_number(r.ref.t_max)
            << ',' << format_number(r.t_max_err) << ',' << format_number(r.computed.S_over_kB)
            << ',' << format_number(r.ref.s) << ',' << format_number(r.s_err) << ','
            << format_number(r.computed.emission_rate) << ',' << format_number(r.ref.r) << ','
            << format_number(r.r_err) << ',' << (r.pass ? 1 : 0) << '\n';
        passed += r.pass ? 1 : 0;
    }
    log << "table " << table_id << ": " << passed << "/" << t.rows.size()
        << " rows within tolerance (T_max " << format_number(100 * tol.t_max) << "%, S "
        << format_number(100 * tol.s) << "%, R " << format_number(100 * tol.r) << "%)";
    if (table_id != 1) log << ", omega_m ordering " << (t.ordering_ok ? "holds" : "violated");
    log << '\n';
    return t.all_rows_pass() && t.ordering_ok ? kSuccess : kAcceptanceFailure;
}

int cmd_modulation(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    if (cfg.params.variant == EngineVariant::HE_pu)
        throw ConfigError("variant", "HE_pu carries no mirror modulation");
    const bool both = cfg.method == MethodChoice::Both;
    std::vector<SpectrumRow> cf, fl;
    if (cfg.method != MethodChoice::Floquet)
        cf = sweep_spectrum(cfg.params, cfg.grid, options(cfg, Method::ClosedForm));
    if (cfg.method != MethodChoice::ClosedForm)
        fl = sweep_spectrum(cfg.params, cfg.grid, options(cfg, Method::Floquet));
    const auto& first = cf.empty() ? fl : cf;

    out << "delta_pr_2pi_mhz";
    if (both)
        out << ",mod_amplitude_cf,mod_amplitude_fl,mod_phase_over_pi_cf,mod_phase_over_pi_fl";
    else
        out << ",mod_amplitude,mod_phase_over_pi";
    out << ",flags\n";
    for (std::size_t i = 0; i < first.size(); ++i) {
        out << format_number(first[i].delta_pr);
        if (both) {
            out << ',' << format_number(cf[i].mod_amplitude) << ','
                << format_number(fl[i].mod_amplitude) << ',' << phase_over_pi(cf[i].mod_phase)
                << ',' << phase_over_pi(fl[i].mod_phase) << ',' << (cf[i].flags | fl[i].flags);
        } else {
            out << ',' << format_number(first[i].mod_amplitude) << ','
                << phase_over_pi(first[i].mod_phase) << ',' << first[i].flags;
        }
        out << '\n';
    }
    report_row_errors(cf, log);
    report_row_errors(fl, log);
    return has_numerical_error(cf) || has_numerical_error(fl) ? kNumericalFailure : kSuccess;
}

bool VerifyReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.pass; });
}

VerifyReport verify(const RunConfig& cfg) {
    VerifyReport rep;
    rep.warnings = cfg.params.validate();
    const EngineParams p = cfg.params.normalized();
    auto add = [&](std::string name, double measured, double threshold) {
        rep.checks.push_back({std::move(name), measured, threshold, measured <= threshold});
    };

    FloquetOptions fo;
    fo.harmonics = cfg.harmonics;
    const FloquetResult f = solve_floquet(p, fo);
    for (const std::string& w : f.warnings) rep.warnings.push_back(w);
    add("floquet_residual", f.residual, fo.residual_tol);
    add("trace", f.state.trace_error(), 1e-10);
    add("hermiticity", f.state.conjugation_error(), 1e-10);
    add("dc_population_bounds", f.state.population_violation(), 1e-12);

    double negativity = 0.0;
    if (f.state.omega_m > 0.0) {
        const int samples = 64;
        const double period = 2.0 * std::numbers::pi / f.state.omega_m;
        for (int k = 0; k < samples; ++k) {
            const Matrix4c rho = f.state.at_time(period * k / samples);
            const Matrix4c herm = 0.5 * (rho + rho.adjoint());
            Eigen::SelfAdjointEigenSolver<Matrix4c> es(herm, Eigen::EigenvaluesOnly);
            negativity = std::max(negativity, -es.eigenvalues().minCoeff());
        }
    } else {
        const Matrix4c rho = f.state.harmonic(0);
        Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (rho + rho.adjoint()),
                                                   Eigen::EigenvaluesOnly);
        negativity = std::max(0.0, -es.eigenvalues().minCoeff());
    }
    add("positivity", negativity, 1e-9);

    FloquetOptions fo2 = fo;
    fo2.harmonics = cfg.harmonics + 1;
    const FloquetResult f2 = solve_floquet(p, fo2);
    add("truncation", std::abs(f2.state.element(4, 1, 0) - f.state.element(4, 1, 0)), 1e-8);

    const ResponseCoefficients cf = split_coefficients(p, Method::ClosedForm);
    const ResponseCoefficients fl = split_coefficients(p, Method::Floquet);
    const double g41 = reference_gamma41(p.reservoirs, p.decays).as_two_pi_mhz();
    const double x = p.Omega_pr.as_two_pi_mhz() / g41;
    const double scale = std::max(std::abs(fl.sigma_abs), std::abs(fl.sigma_em));
    const double oracle = scale == 0.0 ? 0.0
                                       : std::max(std::abs(cf.sigma_abs - fl.sigma_abs),
                                                  std::abs(cf.sigma_em - fl.sigma_em)) /
                                             scale;
    add("oracle_equivalence", oracle, std::max(1e-3, x * x));

    SweepOptions so = options(cfg, Method::ClosedForm);
    so.modulation = false;
    const EngineReport er = evaluate_engine(p, cfg.grid, so);
    const double violation = std::max({0.0, er.S_over_kB - er.entropy_upper,
                                       er.entropy_lower - er.S_over_kB});
    add("entropy_bounds", violation, 0.0);
    return rep;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    const VerifyReport rep = verify(cfg);
    for (const std::string& w : rep.warnings) out << "# warning: " << w << '\n';
    out << "invariant,measured,threshold,status\n";
    for (const InvariantCheck& c : rep.checks)
        out << c.name << ',' << format_number(c.measured) << ',' << format_number(c.threshold)
            << ',' << (c.pass ? "pass" : "fail") << '\n';
    const auto failed = std::count_if(rep.checks.begin(), rep.checks.end(),
                                      [](const InvariantCheck& c) { return !c.pass; });
    log << rep.checks.size() - static_cast<std::size_t>(failed) << "/" << rep.checks.size()
        << " invariants pass\n";
    return rep.all_pass() ? kSuccess : kAcceptanceFailure;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    SweepOptions so = options(cfg, cfg.method == MethodChoice::Floquet ? Method::Floquet
                                                                         : Method::ClosedForm);
    so.modulation = false;
    const EngineReport er = evaluate_engine(cfg.params, cfg.grid, so);
    out << "variant,entropy_upper,entropy_lower,s_over_kb,t_max_over_t0,t_b_over_t0,"
           "second_law_ok,excluded_rows\n";
    out << qhe::to_string(cfg.params.variant) << ',' << format_number(er.entropy_upper) << ','
        << format_number(er.entropy_lower) << ',' << format_number(er.S_over_kB) << ','
        << format_number(er.T_max_over_T0) << ',' << format_number(er.T_B_over_T0) << ','
        << (er.second_law_ok ? 1 : 0) << ',' << er.excluded_rows << '\n';
    return kSuccess;
}

}  // namespace qhe::cli
