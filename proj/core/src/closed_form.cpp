#include "qhe/closed_form.hpp"

#include "qhe/errors.hpp"

#include <Eigen/LU>

#include <array>
#include <cmath>
#include <numbers>

namespace qhe {

namespace {

constexpr cplx I(0.0, 1.0);

struct Rates {
    bool l2 = false, l3 = false;
    double G1 = 0, G2 = 0, G3 = 0;  // spontaneous decay 4 -> i
    double R1 = 0, R2 = 0, R3 = 0;  // incoherent pumping i -> 4
    double g41 = 0, g42 = 0, g43 = 0, g21 = 0, g31 = 0, g32 = 0;
};

Rates rates_of(const EngineParams& p) {
    Rates r;
    r.l2 = has_level(p.variant, 2);
    r.l3 = has_level(p.variant, 3);
    const PumpRates pu = p.pumps();
    const DephasingSet d = p.dephasing();
    r.G1 = p.decays.Gamma41.as_two_pi_mhz();
    r.R1 = pu.R14.as_two_pi_mhz();
    if (r.l2) {
        r.G2 = p.decays.Gamma42.as_two_pi_mhz();
        r.R2 = pu.R24.as_two_pi_mhz();
    }
    if (r.l3) {
        r.G3 = p.decays.Gamma43.as_two_pi_mhz();
        r.R3 = pu.R34.as_two_pi_mhz();
    }
    r.g41 = d.gamma41.as_two_pi_mhz();
    r.g42 = d.gamma42.as_two_pi_mhz();
    r.g43 = d.gamma43.as_two_pi_mhz();
    r.g21 = d.gamma21.as_two_pi_mhz();
    r.g31 = d.gamma31.as_two_pi_mhz();
    r.g32 = d.gamma32.as_two_pi_mhz();
    return r;
}

// Zero-order (probe off) unknowns: populations and the coherences among levels 2, 3, 4.
enum Z { P1, P2, P3, P4, R42, R24, R43, R34, R23, R32, NZ };
using Vec10 = Eigen::Matrix<cplx, NZ, 1>;
using Mat10 = Eigen::Matrix<cplx, NZ, NZ>;

struct ZeroOrderSystem {
    Mat10 A = Mat10::Zero();  // full generator at the given control amplitude
    Mat10 C = Mat10::Zero();  // derivative of the generator with respect to Omega_c
    std::array<bool, NZ> pinned{};
};

ZeroOrderSystem zero_order_system(const Rates& r, double op, double oc, double dpu, double dc) {
    ZeroOrderSystem s;
    Mat10& A = s.A;
    Mat10& C = s.C;
    const double h = 0.5;

    A(P1, P1) = -r.R1;
    A(P1, P4) = r.G1 + r.R1;
    A(P2, P2) = -r.R2;
    A(P2, P4) = r.G2 + r.R2;
    A(P2, R42) = I * h * op;
    A(P2, R24) = -I * h * op;
    A(P3, P3) = -r.R3;
    A(P3, P4) = r.G3 + r.R3;
    C(P3, R43) = I * h;
    C(P3, R34) = -I * h;
    A(P4, P1) = r.R1;
    A(P4, P2) = r.R2;
    A(P4, P3) = r.R3;
    A(P4, P4) = -(r.G1 + r.R1 + r.G2 + r.R2 + r.G3 + r.R3);
    A(P4, R42) = -I * h * op;
    A(P4, R24) = I * h * op;
    C(P4, R43) = -I * h;
    C(P4, R34) = I * h;

    A(R42, R42) = -(0.5 * r.g42 + I * dpu);
    A(R42, P2) = I * h * op;
    A(R42, P4) = -I * h * op;
    C(R42, R32) = I * h;
    A(R24, R24) = -(0.5 * r.g42 - I * dpu);
    A(R24, P2) = -I * h * op;
    A(R24, P4) = I * h * op;
    C(R24, R23) = -I * h;

    A(R43, R43) = -(0.5 * r.g43 + I * dc);
    C(R43, P3) = I * h;
    C(R43, P4) = -I * h;
    A(R43, R23) = I * h * op;
    A(R34, R34) = -(0.5 * r.g43 - I * dc);
    C(R34, P3) = -I * h;
    C(R34, P4) = I * h;
    A(R34, R32) = -I * h * op;

    A(R23, R23) = -(0.5 * r.g32 + I * (dc - dpu));
    A(R23, R43) = I * h * op;
    C(R23, R24) = -I * h;
    A(R32, R32) = -(0.5 * r.g32 - I * (dc - dpu));
    A(R32, R34) = -I * h * op;
    C(R32, R42) = I * h;

    A += oc * C;

    if (!r.l2) s.pinned[P2] = s.pinned[R42] = s.pinned[R24] = true;
    if (!r.l3) s.pinned[P3] = s.pinned[R43] = s.pinned[R34] = true;
    if (!(r.l2 && r.l3)) s.pinned[R23] = s.pinned[R32] = true;
    return s;
}

// Replaces the P4 equation by the trace condition and pinned rows by identities.
Vec10 solve_constrained(Mat10 m, Vec10 b, const std::array<bool, NZ>& pinned, cplx trace) {
    m.row(P4).setZero();
    for (int k : {P1, P2, P3, P4}) m(P4, k) = 1.0;
    b(P4) = trace;
    for (int k = 0; k < NZ; ++k)
        if (pinned[static_cast<std::size_t>(k)]) {
            m.row(k).setZero();
            m(k, k) = 1.0;
            b(k) = 0.0;
        }
    Eigen::FullPivLU<Mat10> lu(m);
    lu.setThreshold(1e-13);
    if (lu.rank() < NZ)
        throw DomainError("closed form: degenerate zero-order population/coherence system");
    return lu.solve(b);
}

struct Inputs {
    Rates r;
    double op = 0, oc = 0;      // pump and control Rabi frequencies
    double dpr = 0, dpu = 0, dc = 0;
    double w = 0;               // mirror frequency
    double eps = 0;
};

Inputs inputs_of(const EngineParams& params) {
    const EngineParams p = params.normalized();
    Inputs in;
    in.r = rates_of(p);
    in.op = p.Omega_pu.as_two_pi_mhz();
    in.oc = p.Omega_c.as_two_pi_mhz();
    in.dpr = p.Delta_pr.as_two_pi_mhz();
    in.dpu = p.Delta_pu.as_two_pi_mhz();
    in.dc = p.Delta_c.as_two_pi_mhz();
    in.w = p.omega_m.as_two_pi_mhz();
    in.eps = p.epsilon;
    return in;
}

Inputs branch_inputs(const EngineParams& params, int branch) {
    Inputs in = inputs_of(params);
    if (params.variant != EngineVariant::HE_pu) {
        in.dc -= branch * in.w;
        in.oc *= 1.0 + 0.5 * in.eps;
    }
    in.eps = 0.0;
    in.w = 0.0;
    return in;
}

// Zero-order harmonics l = -1, 0, +1 stored at index l + 1.
struct ZeroOrder {
    std::array<Vec10, 3> z{Vec10::Zero(), Vec10::Zero(), Vec10::Zero()};
    const Vec10& operator[](int l) const { return z[static_cast<std::size_t>(l + 1)]; }
    Vec10& operator[](int l) { return z[static_cast<std::size_t>(l + 1)]; }
};

ZeroOrder zero_order(const Inputs& in) {
    const ZeroOrderSystem s = zero_order_system(in.r, in.op, in.oc, in.dpu, in.dc);
    ZeroOrder zo;
    zo[0] = solve_constrained(s.A, Vec10::Zero(), s.pinned, 1.0);
    if (in.eps > 0.0 && in.oc > 0.0 && in.w != 0.0) {
        const Vec10 src = -(0.5 * in.eps * in.oc) * (s.C * zo[0]);
        for (int l : {-1, 1}) {
            Mat10 m = s.A;
            m.diagonal().array() += I * (l * in.w);
            zo[l] = solve_constrained(m, src, s.pinned, 0.0);
        }
    }
    return zo;
}

ZeroOrder absorber_part(const ZeroOrder& zo) {
    ZeroOrder a;
    for (int l = -1; l <= 1; ++l) a[l](P1) = zo[l](P1);
    return a;
}

ZeroOrder emitter_part(const ZeroOrder& zo) {
    ZeroOrder e = zo;
    for (int l = -1; l <= 1; ++l) e[l](P1) = 0.0;
    return e;
}

cplx checked_div(cplx num, cplx den) {
    if (std::abs(den) < 1e-14) throw DomainError("closed form: degenerate coupling denominator");
    return num / den;
}

// <1|rho_l|4> to first order, per unit probe Rabi frequency, for harmonics l = -1, 0, +1.
std::array<cplx, 3> probe_family(const Inputs& in, const ZeroOrder& zo) {
    const Rates& r = in.r;
    auto d14 = [&](int l) { return 0.5 * r.g41 - I * (in.dpr + l * in.w); };
    auto d12 = [&](int l) { return 0.5 * r.g21 - I * (in.dpr - in.dpu + l * in.w); };
    auto d13 = [&](int l) { return 0.5 * r.g31 - I * (in.dpr - in.dc + l * in.w); };
    const bool pump = r.l2 && in.op != 0.0;
    const bool ctrl = r.l3 && in.oc != 0.0;

    auto solve = [&](int l, cplx extra) {
        cplx g = d14(l);
        cplx n = -0.5 * I * (zo[l](P1) - zo[l](P4)) + extra;
        if (pump) {
            const cplx d = d12(l);
            g += checked_div(0.25 * in.op * in.op, d);
            n += checked_div(0.25 * in.op * zo[l](R42), d);
        }
        if (ctrl) {
            const cplx d = d13(l);
            g += checked_div(0.25 * in.oc * in.oc, d);
            n += checked_div(0.25 * in.oc * zo[l](R43), d);
        }
        return checked_div(n, g);
    };

    std::array<cplx, 3> out{};
    out[1] = solve(0, 0.0);
    if (ctrl && in.eps > 0.0 && in.w != 0.0) {
        const cplx rho13 = checked_div(0.5 * I * zo[0](R43) - 0.5 * I * in.oc * out[1], d13(0));
        for (int l : {-1, 1}) {
            const cplx s = -0.25 * I * in.eps * in.oc * rho13 -
                           checked_div(0.125 * in.eps * in.oc * in.oc * out[1], d13(l));
            out[static_cast<std::size_t>(l + 1)] = solve(l, s);
        }
    }
    return out;
}

// Converts to the probe-emission labelling: <4|rho_l|1> = conj(<1|rho_-l|4>).
CoherenceHarmonics relabel(const std::array<cplx, 3>& p14, const ZeroOrder& zo, double opr,
                           bool with_43) {
    CoherenceHarmonics h;
    h.rho14_dc = opr * std::conj(p14[1]);
    h.rho14_plus = opr * std::conj(p14[0]);
    h.rho14_minus = opr * std::conj(p14[2]);
    if (with_43) {
        h.rho43_plus = zo[1](R34);
        h.rho43_minus = zo[-1](R34);
    }
    return h;
}

int branch_of(int sign) { return sign >= 0 ? 1 : -1; }

// Printed coupled expressions, one branch. Output in the labelling of CoherenceHarmonics.
struct LiteralBranch {
    cplx rho14, rho43, rho14_em;
};

LiteralBranch literal_branch(const EngineParams& params, int branch, bool nested) {
    const EngineParams p = params.normalized();
    const ClosedFormPieces pop = populations(p, branch);
    const Denominators den = response_denominators(p, branch);
    const DephasingSet d = p.dephasing();
    const double opr = p.Omega_pr.as_two_pi_mhz();
    const double oc = p.Omega_c.as_two_pi_mhz();
    const double eps = p.epsilon;
    const cplx d31 = 0.5 * d.gamma31.as_two_pi_mhz() -
                     I * (p.Delta_pr - p.Delta_c + branch * p.omega_m).as_two_pi_mhz();

    const cplx a_full = checked_div(I * opr * (pop.rho11 - pop.rho44), 2.0 * den.G);
    const cplx a_em = checked_div(-I * opr * pop.rho44, 2.0 * den.G);
    cplx c = 0.0, f = 0.0, e = 0.0;
    if (oc != 0.0 && eps != 0.0) {
        c = checked_div(opr * oc * 0.5 * eps, 4.0 * d31 * den.G);
        f = checked_div(opr * oc * 0.5 * eps, 4.0 * d31 * den.F);
        const cplx pref = nested ? checked_div(eps, 2.0 * den.F) : cplx(0.5 * eps);
        e = checked_div(I * pref * oc * (pop.rho44 - pop.rho33), 2.0 * den.F);
    }
    const cplx det = 1.0 - c * f;
    if (std::abs(det) < 1e-14) throw DomainError("closed form: degenerate 2x2 coupling");
    LiteralBranch out;
    out.rho14 = (a_full + c * e) / det;
    out.rho14_em = (a_em + c * e) / det;
    out.rho43 = e + f * out.rho14;
    return out;
}

}  // namespace

ClosedFormPieces populations(const EngineParams& params, int branch) {
    const EngineParams p = params.normalized();
    const Inputs in = inputs_of(p);
    const Rates& r = in.r;
    const int b = branch_of(branch);

    ClosedFormPieces out;
    out.X = r.R2;
    if (r.l2 && r.g42 > 0.0)
        out.X += r.g42 * in.op * in.op / (r.g42 * r.g42 + 4.0 * in.dpu * in.dpu);
    out.Y = r.R3;
    if (r.l3 && r.g43 > 0.0) {
        const double oc = (1.0 + 0.5 * in.eps) * in.oc;
        const double dc = in.dc - b * in.w;
        out.Y += r.g43 * oc * oc / (r.g43 * r.g43 + 4.0 * dc * dc);
    }
    const Denominators den = response_denominators(p, b);
    out.G = den.G;
    out.F = den.F;

    // Each ground level balances against level 4: rho_ii / rho_44 = (Gamma_4i + K_i) / K_i,
    // with K_1 = R14, K_2 = X, K_3 = Y. Weights are multiplied through by the product of
    // the active K's to stay finite as any of them vanishes.
    const double X = out.X, Y = out.Y, R = r.R1;
    const double kx = r.l2 ? X : 1.0;
    const double ky = r.l3 ? Y : 1.0;
    const double w1 = kx * ky * (r.G1 + R);
    const double w2 = r.l2 ? ky * R * (r.G2 + X) : 0.0;
    const double w3 = r.l3 ? kx * R * (r.G3 + Y) : 0.0;
    const double w4 = kx * ky * R;
    const double norm = w1 + w2 + w3 + w4;
    if (!(std::abs(norm) > 1e-300) || !std::isfinite(norm))
        throw DomainError("populations: vanishing normalization (no rates to balance)");
    out.rho11 = w1 / norm;
    out.rho22 = w2 / norm;
    out.rho33 = w3 / norm;
    out.rho44 = w4 / norm;
    const double sum = out.rho11 + out.rho22 + out.rho33 + out.rho44;
    if (std::abs(sum - 1.0) > 1e-12) throw DomainError("populations: normalization drift");
    return out;
}

Denominators response_denominators(const EngineParams& params, int branch) {
    const EngineParams p = params.normalized();
    const Inputs in = inputs_of(p);
    const Rates& r = in.r;
    const double s = branch_of(branch) * in.w;

    Denominators d;
    d.G = 0.5 * r.g41 - I * in.dpr;
    if (in.op != 0.0)
        d.G += checked_div(in.op * in.op, 4.0 * (0.5 * r.g21 - I * (in.dpr - in.dpu)));
    if (in.oc != 0.0 && in.eps != 0.0) {
        const double a = 0.5 * in.eps;
        d.G += checked_div(a * a * in.oc * in.oc,
                           4.0 * (0.5 * r.g31 - I * (in.dpr - in.dc) - I * s));
    }
    d.F = 0.5 * r.g43 + I * in.dc - I * s;
    if (in.op != 0.0 && r.l3)
        d.F += checked_div(in.op * in.op, 4.0 * (0.5 * r.g32 + I * (in.dpu - in.dc) - I * s));
    return d;
}

ProbeHarmonicsSplit coherence_harmonics_split(const EngineParams& params, HarmonicsModel model) {
    const EngineParams p = params.normalized();
    ProbeHarmonicsSplit out;
    if (model == HarmonicsModel::Perturbative) {
        const Inputs in = inputs_of(p);
        const ZeroOrder zo = zero_order(in);
        const double opr = p.Omega_pr.as_two_pi_mhz();
        const ZeroOrder za = absorber_part(zo);
        const ZeroOrder ze = emitter_part(zo);
        out.absorber = relabel(probe_family(in, za), za, opr, false);
        out.emitter = relabel(probe_family(in, ze), ze, opr, true);
        return out;
    }
    const bool nested = model == HarmonicsModel::LiteralNested;
    const LiteralBranch plus = literal_branch(p, +1, nested);
    const LiteralBranch minus = literal_branch(p, -1, nested);
    out.emitter.rho14_plus = plus.rho14_em;
    out.emitter.rho14_minus = minus.rho14_em;
    out.emitter.rho43_plus = plus.rho43;
    out.emitter.rho43_minus = minus.rho43;
    out.absorber.rho14_plus = plus.rho14 - plus.rho14_em;
    out.absorber.rho14_minus = minus.rho14 - minus.rho14_em;

    EngineParams q = p;
    q.epsilon = 0.0;
    const ClosedFormPieces pop = populations(q, +1);
    const cplx g = response_denominators(q, +1).G;
    const double opr = p.Omega_pr.as_two_pi_mhz();
    out.absorber.rho14_dc = checked_div(I * opr * pop.rho11, 2.0 * g);
    out.emitter.rho14_dc = checked_div(-I * opr * pop.rho44, 2.0 * g);
    return out;
}

CoherenceHarmonics coherence_harmonics(const EngineParams& params, HarmonicsModel model) {
    const EngineParams p = params.normalized();
    if (model == HarmonicsModel::Perturbative) {
        const Inputs in = inputs_of(p);
        const ZeroOrder zo = zero_order(in);
        return relabel(probe_family(in, zo), zo, p.Omega_pr.as_two_pi_mhz(), true);
    }
    const ProbeHarmonicsSplit s = coherence_harmonics_split(p, model);
    CoherenceHarmonics h = s.emitter;
    h.rho14_dc += s.absorber.rho14_dc;
    h.rho14_plus += s.absorber.rho14_plus;
    h.rho14_minus += s.absorber.rho14_minus;
    return h;
}

DcResponse dc_probe_response(const EngineParams& params, int branch) {
    const Inputs in = branch_inputs(params, branch_of(branch));
    const ZeroOrder zo = zero_order(in);
    DcResponse r;
    r.absorber = std::conj(probe_family(in, absorber_part(zo))[1]);
    r.emitter = std::conj(probe_family(in, emitter_part(zo))[1]);
    return r;
}

ModulationResult modulation_from(const CoherenceHarmonics& em) {
    const cplx c = em.rho14_plus - std::conj(em.rho14_minus);
    ModulationResult m;
    m.amplitude = std::abs(c);
    if (m.amplitude > 0.0) {
        double a = 0.5 * std::numbers::pi - std::arg(c);
        while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
        while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
        m.phase_alpha = a;
    }
    return m;
}

ModulationResult modulation(const EngineParams& p, HarmonicsModel model) {
    return modulation_from(coherence_harmonics_split(p, model).emitter);
}

}  // namespace qhe
