#pragma once

#include "qhe/engine.hpp"

#include <complex>
#include <random>

namespace sampling {

struct Ranges {
    double omega_pr_max = 0.1;  // in reference gamma41
    double omega_pr_min = 0.0;
    double field_max = 2.0;     // pump and control, in reference gamma41
    double detuning_max = 10.0; // pump and control detunings, 2pi x MHz
    double probe_detuning_max = 20.0;
    double omega_m_min = 0.5;
    double omega_m_max = 3.0;
    double epsilon_max = 0.02;
    double t_min = 3000.0;
    double t_max = 8000.0;
};

/// A random valid parameter set in the weak-probe, small-sideband regime.
inline qhe::EngineParams draw(std::mt19937_64& rng, const Ranges& r = {}) {
    using qhe::mhz;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
    const qhe::EngineVariant variants[] = {qhe::EngineVariant::HE_pu, qhe::EngineVariant::HE_c,
                                           qhe::EngineVariant::HE_puc};
    qhe::EngineParams p = qhe::EngineParams::defaults(variants[rng() % 3]);
    p.reservoirs.T41 = in(r.t_min, r.t_max);
    p.reservoirs.T42 = in(r.t_min, r.t_max);
    p.reservoirs.T43 = in(r.t_min, r.t_max);
    const qhe::AngularFrequency g = qhe::reference_gamma41(p.reservoirs, p.decays);
    p.Omega_pr = in(r.omega_pr_min, r.omega_pr_max) * g;
    p.Omega_pu = in(0.0, r.field_max) * g;
    p.Omega_c = in(0.0, r.field_max) * g;
    p.Delta_pr = mhz(in(-r.probe_detuning_max, r.probe_detuning_max));
    p.Delta_pu = mhz(in(-r.detuning_max, r.detuning_max));
    p.Delta_c = mhz(in(-r.detuning_max, r.detuning_max));
    p.omega_m = mhz(in(r.omega_m_min, r.omega_m_max));
    p.epsilon = in(0.0, r.epsilon_max);
    return p.normalized();
}

inline double rel_err(std::complex<double> a, std::complex<double> ref) {
    const double d = std::abs(a - ref);
    return d == 0.0 ? 0.0 : d / std::abs(ref);
}

}  // namespace sampling
