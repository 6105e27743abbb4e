#pragma once

#include "qhe/reservoir.hpp"
#include "qhe/units.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace qhe {

using cplx = std::complex<double>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Vector16c = Eigen::Matrix<cplx, 16, 1>;
using Superop = Eigen::Matrix<cplx, 16, 16>;

struct EngineParams {
    EngineVariant variant = EngineVariant::HE_puc;
    AngularFrequency Omega_pr;
    AngularFrequency Omega_pu;
    AngularFrequency Omega_c;
    AngularFrequency Delta_pr;
    AngularFrequency Delta_pu;
    AngularFrequency Delta_c;
    AngularFrequency omega_m;
    double epsilon = 0.0;  // sideband strength k_c z0
    ReservoirSpec reservoirs;
    DecayRates decays;

    /// Reference operating point: Omega_pu = Omega_c = gamma41, Omega_pr = 0.05 gamma41,
    /// epsilon = 0.01, omega_m = 2, all detunings zero, 5000 K reservoirs.
    static EngineParams defaults(EngineVariant v);

    /// Copy with the fields a variant does not carry forced to zero
    /// (HE_pu: epsilon, omega_m, Omega_c, Delta_c; HE_c: Omega_pu, Delta_pu).
    EngineParams normalized() const;

    /// Throws ConfigError for invalid input; returns soft warnings (e.g. large epsilon).
    std::vector<std::string> validate() const;

    PumpRates pumps() const;
    DephasingSet dephasing() const;
};

/// gamma41 of the full tripod with the same reservoirs and decays. Used as the common
/// scale for Rabi frequencies across all variants.
AngularFrequency reference_gamma41(const ReservoirSpec& res, const DecayRates& decays);

/// Levels (0-based) that take part in the dynamics of a variant.
std::array<bool, 4> active_levels(EngineVariant v);

/// Static rotating-frame Hamiltonian, hbar = 1, entries in 2pi x MHz.
Matrix4c hamiltonian_dc(const EngineParams& p);

struct SidebandPair {
    Matrix4c plus;   // multiplies exp(-i omega_m t)
    Matrix4c minus;  // multiplies exp(+i omega_m t)
};

/// Mirror sidebands on the control coupling. Throws VariantError for HE_pu.
SidebandPair hamiltonian_sideband(const EngineParams& p);

/// Static Hamiltonian of one mirror branch (branch = +1 or -1): the control detuning is
/// shifted to Delta_c - branch * omega_m and the control amplitude to Omega_c (1 + epsilon/2).
Matrix4c hamiltonian_branch(const EngineParams& p, int branch);

/// Decay/pumping channel between the excited level 4 and ground level `lower` (1..3).
struct DissipatorChannel {
    int lower = 1;
    double down = 0.0;  // rate 4 -> lower, 2pi x MHz
    double up = 0.0;    // rate lower -> 4, 2pi x MHz
    double occupation = 0.0;
};

struct Dissipator {
    std::vector<DissipatorChannel> channels;
};

struct DissipatorPair {
    Dissipator spontaneous;  // Gamma_4i, zero temperature
    Dissipator thermal;      // stimulated emission and absorption, Gamma_4i n_4i each way
};

DissipatorPair dissipators(const EngineParams& p);

/// Row-major vectorization: vec(rho)[4 j + k] = rho(j, k).
Vector16c vec(const Matrix4c& rho);
Matrix4c unvec(const Vector16c& v);

/// Superoperator of rho -> -i [H, rho].
Superop commutator_superop(const Matrix4c& H);

/// Superoperator of the dissipative part for the given channels.
Superop dissipator_superop(const Dissipator& d);

/// Full static generator -i[H, .] + D1 + D2.
Superop liouvillian(const Matrix4c& H, const DissipatorPair& d);

}  // namespace qhe
