#pragma once

#include "qhe/closed_form.hpp"
#include "qhe/engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qhe {

enum class Method { ClosedForm, Floquet };

/// Absorption and emission coefficients: imaginary parts of the absorber and (negated)
/// emitter probe coherence, per unit probe Rabi frequency.
struct ResponseCoefficients {
    double sigma_abs = 0.0;
    double sigma_em = 0.0;
};

/// One mirror branch (+1 / -1); HE_pu ignores the branch.
ResponseCoefficients split_coefficients_branch(const EngineParams& p, int branch, Method m);
/// Arithmetic mean of the two mirror branches (a single evaluation for HE_pu or omega_m = 0).
ResponseCoefficients split_coefficients(const EngineParams& p, Method m = Method::ClosedForm);

struct Brightness {
    double value = 0.0;
    bool gain = false;  // sigma_em > sigma_abs: no absorptive asymptote
};

/// B = sigma_em / (sigma_abs - sigma_em). Throws DomainError when the denominator vanishes.
Brightness brightness(const ResponseCoefficients& s);

enum RowFlag : unsigned {
    kGain = 1u,              // sigma_em > sigma_abs
    kNegativeEmission = 2u,  // sigma_em < 0
    kNumericalError = 4u,    // evaluation failed; see message
};

struct SpectrumRow {
    double delta_pr = 0.0;  // 2pi x MHz
    double sigma_abs = 0.0;
    double sigma_em = 0.0;
    double brightness = 0.0;
    double brightness_over_n41 = 0.0;
    double mod_amplitude = 0.0;
    std::optional<double> mod_phase;  // radians
    unsigned flags = 0;
    std::string message;

    /// Rows that enter the entropy and emission integrals.
    bool usable() const { return flags == 0; }
};

struct GridSpec {
    double min = -50.0;  // 2pi x MHz
    double max = 50.0;
    int points = 2001;

    void validate() const;
    double step() const { return (max - min) / (points - 1); }
    double at(int i) const { return i + 1 == points ? max : min + i * step(); }
};

struct SweepOptions {
    Method method = Method::ClosedForm;
    bool modulation = true;
    int harmonics = 2;
    HarmonicsModel model = HarmonicsModel::Perturbative;
};

/// One row per grid point; per-point failures are flagged, never thrown.
std::vector<SpectrumRow> sweep_spectrum(const EngineParams& p, const GridSpec& grid,
                                        const SweepOptions& opt = {});

/// T_max / T0 = (hbar omega41 / kB T0) / ln(1/B + 1). Throws DomainError for B <= 0.
double t_max(double b_line_center, AngularFrequency omega41, double T0);

/// Composite Simpson rule on uniform samples (3/8 rule on the tail for an odd interval count).
double simpson(const std::vector<double>& y, double h);

struct EntropyFlow {
    double S_over_kB = 0.0;
    int excluded_rows = 0;
};

/// S / kB = int[(B+1)ln(B+1) - B ln B] / int B over the grid; flagged rows contribute zero.
/// Throws DomainError when int B vanishes.
EntropyFlow entropy_flow(const std::vector<SpectrumRow>& rows);

struct EntropyBounds {
    double upper = 0.0;
    double lower = 0.0;
};
EntropyBounds entropy_bounds(EngineVariant v, const ReservoirSpec& res);

/// (1/2pi) int B d(Delta_pr) with Delta_pr in 2pi x MHz; flagged rows contribute zero.
double emission_rate(const std::vector<SpectrumRow>& rows);
/// The same integral with the probe frequency in rad/s, giving photons per second.
double emission_rate_per_second(const std::vector<SpectrumRow>& rows);

/// I = 2 I_s (2 Omega / Gamma)^2
double rabi_intensity(AngularFrequency omega, AngularFrequency gamma, double i_s);
AngularFrequency rabi_from_intensity(double intensity, AngularFrequency gamma, double i_s);

struct EngineReport {
    double S_over_kB = 0.0;
    double T_B_over_T0 = 0.0;    // peak brightness temperature over the grid
    double T_max_over_T0 = 0.0;  // from B at Delta_pr = 0
    double B_line_center = 0.0;
    double emission_rate = 0.0;
    double entropy_upper = 0.0;
    double entropy_lower = 0.0;
    bool second_law_ok = false;
    int excluded_rows = 0;
};

EngineReport evaluate_engine(const EngineParams& p, const GridSpec& grid,
                             const SweepOptions& opt = {});
EngineReport report_from(const EngineParams& p, const std::vector<SpectrumRow>& rows,
                         double b_line_center);

}  // namespace qhe
