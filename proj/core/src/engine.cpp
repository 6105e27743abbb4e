#include "qhe/engine.hpp"

#include "qhe/errors.hpp"

#include <cmath>

namespace qhe {

namespace {

void require_nonnegative(AngularFrequency w, const char* field) {
    if (!(w.rad_s() >= 0.0) || !std::isfinite(w.rad_s()))
        throw ConfigError(field, "must be a non-negative finite frequency");
}

void require_finite(AngularFrequency w, const char* field) {
    if (!std::isfinite(w.rad_s())) throw ConfigError(field, "must be finite");
}

Matrix4c sigma(int j, int k) {
    Matrix4c m = Matrix4c::Zero();
    m(j, k) = 1.0;
    return m;
}

}  // namespace

AngularFrequency reference_gamma41(const ReservoirSpec& res, const DecayRates& decays) {
    const auto v = EngineVariant::HE_puc;
    return dephasing_rates(v, decays, pump_rates(v, res, decays)).gamma41;
}

EngineParams EngineParams::defaults(EngineVariant v) {
    EngineParams p;
    p.variant = v;
    const AngularFrequency g = reference_gamma41(p.reservoirs, p.decays);
    p.Omega_pr = 0.05 * g;
    p.Omega_pu = g;
    p.Omega_c = g;
    p.omega_m = mhz(2.0);
    p.epsilon = 0.01;
    return p.normalized();
}

EngineParams EngineParams::normalized() const {
    EngineParams p = *this;
    if (p.variant == EngineVariant::HE_pu) {
        p.epsilon = 0.0;
        p.omega_m = {};
        p.Omega_c = {};
        p.Delta_c = {};
    } else if (p.variant == EngineVariant::HE_c) {
        p.Omega_pu = {};
        p.Delta_pu = {};
    }
    return p;
}

std::vector<std::string> EngineParams::validate() const {
    reservoirs.validate();
    require_nonnegative(decays.Gamma41, "Gamma41");
    require_nonnegative(decays.Gamma42, "Gamma42");
    require_nonnegative(decays.Gamma43, "Gamma43");
    require_nonnegative(Omega_pr, "Omega_pr");
    require_nonnegative(Omega_pu, "Omega_pu");
    require_nonnegative(Omega_c, "Omega_c");
    require_finite(Delta_pr, "Delta_pr");
    require_finite(Delta_pu, "Delta_pu");
    require_finite(Delta_c, "Delta_c");
    require_finite(omega_m, "omega_m");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw ConfigError("epsilon", "must be a non-negative finite number");

    std::vector<std::string> warnings;
    if (epsilon > 0.1)
        warnings.push_back("epsilon = " + std::to_string(epsilon) +
                           " is outside the perturbative sideband regime (> 0.1)");
    const EngineParams n = normalized();
    const AngularFrequency g41 = n.dephasing().gamma41;
    if (Omega_pr > 0.1 * g41)
        warnings.push_back("Omega_pr exceeds 0.1 gamma41; first-order probe response is inaccurate");
    if (variant == EngineVariant::HE_pu && (epsilon != 0.0 || omega_m.rad_s() != 0.0))
        warnings.push_back("HE_pu carries no mirror; epsilon and omega_m are ignored");
    if (variant == EngineVariant::HE_c && Omega_pu.rad_s() != 0.0)
        warnings.push_back("HE_c carries no pump; Omega_pu is ignored");
    return warnings;
}

PumpRates EngineParams::pumps() const { return pump_rates(variant, reservoirs, decays); }

DephasingSet EngineParams::dephasing() const {
    return dephasing_rates(variant, decays, pumps());
}

std::array<bool, 4> active_levels(EngineVariant v) {
    return {true, has_level(v, 2), has_level(v, 3), true};
}

Matrix4c hamiltonian_dc(const EngineParams& params) {
    const EngineParams p = params.normalized();
    const double dpr = p.Delta_pr.as_two_pi_mhz();
    Matrix4c h = Matrix4c::Zero();
    h(3, 3) = dpr;
    h(0, 3) = h(3, 0) = -0.5 * p.Omega_pr.as_two_pi_mhz();
    if (has_level(p.variant, 2)) {
        h(1, 1) = dpr - p.Delta_pu.as_two_pi_mhz();
        h(1, 3) = h(3, 1) = -0.5 * p.Omega_pu.as_two_pi_mhz();
    }
    if (has_level(p.variant, 3)) {
        h(2, 2) = dpr - p.Delta_c.as_two_pi_mhz();
        h(2, 3) = h(3, 2) = -0.5 * p.Omega_c.as_two_pi_mhz();
    }
    return h;
}

SidebandPair hamiltonian_sideband(const EngineParams& params) {
    if (params.variant == EngineVariant::HE_pu)
        throw VariantError("hamiltonian_sideband: HE_pu has no mirror coupling");
    const double a = -0.25 * params.Omega_c.as_two_pi_mhz() * params.epsilon;
    SidebandPair v{Matrix4c::Zero(), Matrix4c::Zero()};
    v.plus(2, 3) = v.plus(3, 2) = a;
    v.minus = v.plus.adjoint();
    return v;
}

Matrix4c hamiltonian_branch(const EngineParams& params, int branch) {
    EngineParams p = params.normalized();
    if (p.variant == EngineVariant::HE_pu) return hamiltonian_dc(p);
    p.Delta_c = p.Delta_c - static_cast<double>(branch) * p.omega_m;
    p.Omega_c = (1.0 + 0.5 * p.epsilon) * p.Omega_c;
    return hamiltonian_dc(p);
}

DissipatorPair dissipators(const EngineParams& params) {
    const EngineParams p = params.normalized();
    const ReservoirSpec& r = p.reservoirs;
    struct Source {
        int level;
        AngularFrequency gamma;
        AngularFrequency omega;
        double T;
    };
    const Source sources[] = {
        {1, p.decays.Gamma41, r.omega41, r.T41},
        {2, p.decays.Gamma42, r.omega42, r.T42},
        {3, p.decays.Gamma43, r.omega43, r.T43},
    };
    DissipatorPair d;
    for (const Source& s : sources) {
        if (!has_level(p.variant, s.level)) continue;
        const double g = s.gamma.as_two_pi_mhz();
        const double n = photon_occupation(s.omega, s.T);
        d.spontaneous.channels.push_back({s.level, g, 0.0, 0.0});
        d.thermal.channels.push_back({s.level, g * n, g * n, n});
    }
    return d;
}

Vector16c vec(const Matrix4c& rho) {
    Vector16c v;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) v(4 * j + k) = rho(j, k);
    return v;
}

Matrix4c unvec(const Vector16c& v) {
    Matrix4c rho;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) rho(j, k) = v(4 * j + k);
    return rho;
}

namespace {

// Row-major vec(A X B) = (A kron B^T) vec(X).
Superop kron(const Matrix4c& a, const Matrix4c& b) {
    Superop s;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return s;
}

void add_jump(Superop& s, const Matrix4c& c) {
    const Matrix4c id = Matrix4c::Identity();
    const Matrix4c cdc = c.adjoint() * c;
    s += kron(c, c.conjugate()) - 0.5 * kron(cdc, id) - 0.5 * kron(id, cdc.transpose());
}

}  // namespace

Superop commutator_superop(const Matrix4c& H) {
    const Matrix4c id = Matrix4c::Identity();
    return cplx(0.0, -1.0) * (kron(H, id) - kron(id, H.transpose()));
}

Superop dissipator_superop(const Dissipator& d) {
    Superop s = Superop::Zero();
    for (const DissipatorChannel& ch : d.channels) {
        const int i = ch.lower - 1;
        if (ch.down > 0.0) add_jump(s, std::sqrt(ch.down) * sigma(i, 3));
        if (ch.up > 0.0) add_jump(s, std::sqrt(ch.up) * sigma(3, i));
    }
    return s;
}

Superop liouvillian(const Matrix4c& H, const DissipatorPair& d) {
    return commutator_superop(H) + dissipator_superop(d.spontaneous) +
           dissipator_superop(d.thermal);
}

}  // namespace qhe
