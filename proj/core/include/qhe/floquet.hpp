#pragma once

#include "qhe/engine.hpp"

#include <array>
#include <string>
#include <vector>

namespace qhe {

/// Truncated Fourier expansion rho(t) = sum_l rho_l exp(-i l omega_m t), |l| <= order.
/// Times are in units of 1 / (2pi x MHz); omega_m in 2pi x MHz.
struct HarmonicState {
    int order = 0;
    double omega_m = 0.0;
    std::vector<Matrix4c> blocks;  // blocks[l + order]

    /// Harmonic l; zero outside the truncation.
    Matrix4c harmonic(int l) const;
    /// <j| rho_l |k> with 1-based level labels.
    cplx element(int j, int k, int l) const;
    Matrix4c at_time(double t) const;

    /// max |rho_jk,l - conj(rho_kj,-l)|
    double conjugation_error() const;
    /// |sum_j rho_jj,0 - 1| plus max_l |sum_j rho_jj,l| for l != 0.
    double trace_error() const;
    /// Distance of the DC populations from [0, 1]; zero when all lie inside.
    double population_violation() const;
};

/// L(t) = L0 + Lplus exp(-i omega t) + Lminus exp(+i omega t), acting on row-major vec(rho).
struct PeriodicGenerator {
    Superop L0 = Superop::Zero();
    Superop Lplus = Superop::Zero();
    Superop Lminus = Superop::Zero();
    double omega = 0.0;
    std::array<bool, 4> active{true, true, true, true};
};

/// Sideband picture: static Hamiltonian plus the mirror sidebands on the control coupling.
PeriodicGenerator sideband_generator(const EngineParams& p, bool include_probe = true);
/// Time-independent generator of one mirror branch (see hamiltonian_branch).
PeriodicGenerator branch_generator(const EngineParams& p, int branch, bool include_probe = true);

struct FloquetOptions {
    int harmonics = 2;
    bool check_truncation = false;  // re-solve at order + 1 and warn if rho_14,0 moves > 1e-8
    double residual_tol = 1e-10;
};

struct FloquetResult {
    HarmonicState state;
    double residual = 0.0;  // relative residual of the assembled system
    std::vector<std::string> warnings;
};

/// Harmonic-balance steady state. The rho_11,0 equation is replaced by the trace condition
/// and levels outside the variant are pinned to zero. Throws SolverError if the system is
/// rank deficient (the message names the dominant element of the zero mode) or the residual
/// exceeds `residual_tol`.
FloquetResult solve_periodic(const PeriodicGenerator& g, const FloquetOptions& opt = {});

/// solve_periodic on the sideband generator. Requires harmonics >= 1 when epsilon > 0.
FloquetResult solve_floquet(const EngineParams& p, const FloquetOptions& opt = {});

/// First-order probe response per unit Omega_pr. The zero-order state (probe off) is split
/// into the rho_11 part and the remainder; each is driven by the probe coupling separately.
struct ProbeSplit {
    HarmonicState zero_order;
    HarmonicState absorber;
    HarmonicState emitter;
    double residual = 0.0;
};

ProbeSplit probe_split(const PeriodicGenerator& g_without_probe, int harmonics);
ProbeSplit probe_split_sideband(const EngineParams& p, int harmonics = 2);
ProbeSplit probe_split_branch(const EngineParams& p, int branch);

struct Trajectory {
    std::vector<double> t;
    std::vector<Matrix4c> rho;
};

/// Fixed-step RK4 integration of the full time-dependent master equation, starting from the
/// maximally mixed state over the variant's levels. Requires
/// dt <= 0.01 min(2pi / omega_m, 1 / gamma41), otherwise ConfigError("dt").
/// Every `stride`-th state is stored, including the initial one.
Trajectory evolve_time_domain(const EngineParams& p, double t_end, double dt, int stride = 1);

/// Fourier coefficient of <j|rho(t)|k> at harmonic l over the last `periods` full periods
/// of the trajectory. Samples must be uniform with an integer number per period.
cplx trajectory_harmonic(const Trajectory& tr, int j, int k, int l, double omega, int periods);

}  // namespace qhe
