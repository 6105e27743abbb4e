#include "qhe/observables.hpp"

#include "qhe/errors.hpp"
#include "qhe/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qhe {

namespace {

bool has_branches(const EngineParams& p) {
    return p.variant != EngineVariant::HE_pu && p.omega_m.rad_s() != 0.0;
}

double entropy_density(double b) {
    if (b <= 0.0) return 0.0;
    return (b + 1.0) * std::log1p(b) - b * std::log(b);
}

ModulationResult floquet_modulation(const EngineParams& p, int harmonics) {
    const ProbeSplit s = probe_split_sideband(p, std::max(harmonics, 1));
    const double opr = p.Omega_pr.as_two_pi_mhz();
    CoherenceHarmonics em;
    em.rho14_plus = opr * s.emitter.element(4, 1, 1);
    em.rho14_minus = opr * s.emitter.element(4, 1, -1);
    return modulation_from(em);
}

}  // namespace

ResponseCoefficients split_coefficients_branch(const EngineParams& params, int branch, Method m) {
    const EngineParams p = params.normalized();
    ResponseCoefficients s;
    if (m == Method::ClosedForm) {
        const DcResponse r = dc_probe_response(p, branch);
        s.sigma_abs = r.absorber.imag();
        s.sigma_em = -r.emitter.imag();
    } else {
        const ProbeSplit r = probe_split_branch(p, branch);
        s.sigma_abs = r.absorber.element(4, 1, 0).imag();
        s.sigma_em = -r.emitter.element(4, 1, 0).imag();
    }
    return s;
}

ResponseCoefficients split_coefficients(const EngineParams& params, Method m) {
    const EngineParams p = params.normalized();
    if (!has_branches(p)) return split_coefficients_branch(p, +1, m);
    const ResponseCoefficients a = split_coefficients_branch(p, +1, m);
    const ResponseCoefficients b = split_coefficients_branch(p, -1, m);
    return {0.5 * (a.sigma_abs + b.sigma_abs), 0.5 * (a.sigma_em + b.sigma_em)};
}

Brightness brightness(const ResponseCoefficients& s) {
    const double den = s.sigma_abs - s.sigma_em;
    const double scale = std::max(std::abs(s.sigma_abs), std::abs(s.sigma_em));
    if (den == 0.0 || std::abs(den) <= 1e-15 * scale)
        throw DomainError("brightness: sigma_abs equals sigma_em (divergent brightness)");
    return {s.sigma_em / den, den < 0.0};
}

void GridSpec::validate() const {
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
        throw ConfigError("grid", "requires finite min < max");
    if (points < 3) throw ConfigError("grid", "requires at least 3 points");
}

std::vector<SpectrumRow> sweep_spectrum(const EngineParams& params, const GridSpec& grid,
                                        const SweepOptions& opt) {
    grid.validate();
    params.validate();
    const EngineParams base = params.normalized();
    const double n41 = photon_occupation(base.reservoirs.omega41, base.reservoirs.T41);
    const bool modulated = base.variant != EngineVariant::HE_pu && base.epsilon > 0.0 &&
                           base.omega_m.rad_s() != 0.0;

    std::vector<SpectrumRow> rows(static_cast<std::size_t>(grid.points));
    for (int i = 0; i < grid.points; ++i) {
        SpectrumRow& row = rows[static_cast<std::size_t>(i)];
        row.delta_pr = grid.at(i);
        EngineParams p = base;
        p.Delta_pr = mhz(row.delta_pr);
        try {
            const ResponseCoefficients s = split_coefficients(p, opt.method);
            row.sigma_abs = s.sigma_abs;
            row.sigma_em = s.sigma_em;
            const Brightness b = brightness(s);
            row.brightness = b.value;
            row.brightness_over_n41 = b.value / n41;
            if (b.gain) row.flags |= kGain;
            if (s.sigma_em < 0.0) row.flags |= kNegativeEmission;
            if (opt.modulation && modulated) {
                const ModulationResult m = opt.method == Method::ClosedForm
                                               ? modulation(p, opt.model)
                                               : floquet_modulation(p, opt.harmonics);
                row.mod_amplitude = m.amplitude;
                row.mod_phase = m.phase_alpha;
            }
        } catch (const std::exception& e) {
            row.flags |= kNumericalError;
            row.message = e.what();
        }
    }
    return rows;
}

double t_max(double b, AngularFrequency omega41, double T0) {
    if (!(b > 0.0)) throw DomainError("t_max: brightness must be positive");
    return thermal_exponent(omega41, T0) / std::log1p(1.0 / b);
}

double simpson(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (y[0] + y[1]);
    const std::size_t intervals = n - 1;
    std::size_t end = intervals % 2 == 0 ? n - 1 : n - 4;
    double acc = 0.0;
    if (end > 0) {
        double s = y[0] + y[end];
        for (std::size_t i = 1; i < end; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
        acc = s * h / 3.0;
    }
    if (intervals % 2 == 1) {
        if (intervals == 1) return 0.5 * h * (y[0] + y[1]);
        const std::size_t k = end;
        acc += 3.0 * h / 8.0 * (y[k] + 3.0 * y[k + 1] + 3.0 * y[k + 2] + y[k + 3]);
    }
    return acc;
}

namespace {

double uniform_step(const std::vector<SpectrumRow>& rows) {
    if (rows.size() < 2) throw DomainError("spectrum needs at least two rows");
    return (rows.back().delta_pr - rows.front().delta_pr) / static_cast<double>(rows.size() - 1);
}

}  // namespace

EntropyFlow entropy_flow(const std::vector<SpectrumRow>& rows) {
    const double h = uniform_step(rows);
    std::vector<double> f, b;
    EntropyFlow out;
    for (const SpectrumRow& r : rows) {
        const bool ok = r.usable() && r.brightness >= 0.0;
        if (!ok) ++out.excluded_rows;
        b.push_back(ok ? r.brightness : 0.0);
        f.push_back(ok ? entropy_density(r.brightness) : 0.0);
    }
    const double ib = simpson(b, h);
    if (!(ib > 0.0)) throw DomainError("entropy_flow: integrated brightness vanishes");
    out.S_over_kB = simpson(f, h) / ib;
    return out;
}

EntropyBounds entropy_bounds(EngineVariant v, const ReservoirSpec& r) {
    r.validate();
    EntropyBounds b;
    b.upper = thermal_exponent(r.omega41, r.T41);
    b.lower = b.upper;
    if (has_level(v, 2)) b.lower -= thermal_exponent(r.omega42, r.T42);
    if (has_level(v, 3)) b.lower -= thermal_exponent(r.omega43, r.T43);
    return b;
}

double emission_rate(const std::vector<SpectrumRow>& rows) {
    const double h = uniform_step(rows);
    std::vector<double> b;
    for (const SpectrumRow& r : rows)
        b.push_back(r.usable() && r.brightness >= 0.0 ? r.brightness : 0.0);
    return simpson(b, h) / (2.0 * std::numbers::pi);
}

double emission_rate_per_second(const std::vector<SpectrumRow>& rows) {
    return emission_rate(rows) * mhz(1.0).rad_s();
}

double rabi_intensity(AngularFrequency omega, AngularFrequency gamma, double i_s) {
    if (!(gamma.rad_s() > 0.0)) throw DomainError("rabi_intensity: Gamma must be positive");
    const double x = 2.0 * (omega / gamma);
    return 2.0 * i_s * x * x;
}

AngularFrequency rabi_from_intensity(double intensity, AngularFrequency gamma, double i_s) {
    if (!(gamma.rad_s() > 0.0)) throw DomainError("rabi_from_intensity: Gamma must be positive");
    if (!(i_s > 0.0) || !(intensity >= 0.0))
        throw DomainError("rabi_from_intensity: intensities must be non-negative");
    return 0.5 * std::sqrt(intensity / (2.0 * i_s)) * gamma;
}

EngineReport report_from(const EngineParams& params, const std::vector<SpectrumRow>& rows,
                         double b0) {
    const EngineParams p = params.normalized();
    const ReservoirSpec& r = p.reservoirs;
    EngineReport rep;
    const EntropyFlow s = entropy_flow(rows);
    rep.S_over_kB = s.S_over_kB;
    rep.excluded_rows = s.excluded_rows;
    rep.emission_rate = emission_rate(rows);
    rep.B_line_center = b0;
    rep.T_max_over_T0 = t_max(b0, r.omega41, r.T41);
    double peak = 0.0;
    for (const SpectrumRow& row : rows)
        if (row.usable() && row.brightness > peak) peak = row.brightness;
    rep.T_B_over_T0 = peak > 0.0 ? t_max(peak, r.omega41, r.T41) : 0.0;
    const EntropyBounds b = entropy_bounds(p.variant, r);
    rep.entropy_upper = b.upper;
    rep.entropy_lower = b.lower;
    rep.second_law_ok = b.lower <= rep.S_over_kB && rep.S_over_kB <= b.upper;
    return rep;
}

EngineReport evaluate_engine(const EngineParams& params, const GridSpec& grid,
                             const SweepOptions& opt) {
    SweepOptions o = opt;
    o.modulation = false;
    const std::vector<SpectrumRow> rows = sweep_spectrum(params, grid, o);
    EngineParams center = params.normalized();
    center.Delta_pr = {};
    const double b0 = brightness(split_coefficients(center, opt.method)).value;
    return report_from(params, rows, b0);
}

}  // namespace qhe
