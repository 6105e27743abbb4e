#include "qhe/floquet.hpp"

#include "qhe/errors.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qhe {

Matrix4c HarmonicState::harmonic(int l) const {
    if (l < -order || l > order) return Matrix4c::Zero();
    return blocks[static_cast<std::size_t>(l + order)];
}

cplx HarmonicState::element(int j, int k, int l) const {
    if (l < -order || l > order) return 0.0;
    return blocks[static_cast<std::size_t>(l + order)](j - 1, k - 1);
}

Matrix4c HarmonicState::at_time(double t) const {
    Matrix4c rho = Matrix4c::Zero();
    for (int l = -order; l <= order; ++l)
        rho += std::polar(1.0, -l * omega_m * t) * harmonic(l);
    return rho;
}

double HarmonicState::conjugation_error() const {
    double err = 0.0;
    for (int l = -order; l <= order; ++l) {
        const Matrix4c a = harmonic(l);
        const Matrix4c b = harmonic(-l).adjoint();
        err = std::max(err, (a - b).cwiseAbs().maxCoeff());
    }
    return err;
}

double HarmonicState::trace_error() const {
    double err = std::abs(harmonic(0).trace() - 1.0);
    double off = 0.0;
    for (int l = -order; l <= order; ++l)
        if (l != 0) off = std::max(off, std::abs(harmonic(l).trace()));
    return err + off;
}

double HarmonicState::population_violation() const {
    double v = 0.0;
    const Matrix4c dc = harmonic(0);
    for (int j = 0; j < 4; ++j) {
        const double p = dc(j, j).real();
        v = std::max({v, -p, p - 1.0, std::abs(dc(j, j).imag())});
    }
    return v;
}

namespace {

Matrix4c unit_probe_hamiltonian() {
    Matrix4c h = Matrix4c::Zero();
    h(0, 3) = h(3, 0) = -0.5;
    return h;
}

PeriodicGenerator static_generator(const EngineParams& p, const Matrix4c& h) {
    PeriodicGenerator g;
    g.L0 = liouvillian(h, dissipators(p));
    g.active = active_levels(p.variant);
    return g;
}

bool is_modulated(const PeriodicGenerator& g) {
    return g.omega != 0.0 && (g.Lplus.cwiseAbs().maxCoeff() > 0.0 ||
                              g.Lminus.cwiseAbs().maxCoeff() > 0.0);
}

class Assembled {
public:
    Assembled(const PeriodicGenerator& g, int order) : g_(g), order_(order) {
        const int nb = 2 * order + 1;
        n_ = 16 * nb;
        a_ = Eigen::MatrixXcd::Zero(n_, n_);
        for (int b = 0; b < nb; ++b) {
            const int l = b - order;
            a_.block<16, 16>(16 * b, 16 * b) = g.L0;
            a_.block<16, 16>(16 * b, 16 * b).diagonal().array() += cplx(0.0, l * g.omega);
            if (b > 0) a_.block<16, 16>(16 * b, 16 * (b - 1)) = g.Lplus;
            if (b + 1 < nb) a_.block<16, 16>(16 * b, 16 * (b + 1)) = g.Lminus;
        }
        // Trace condition in place of the rho_11,0 equation.
        const int r0 = trace_row();
        a_.row(r0).setZero();
        for (int k = 0; k < 4; ++k) a_(r0, r0 + 5 * k) = 1.0;
        for (int b = 0; b < nb; ++b)
            for (int k = 0; k < 4; ++k) {
                if (g.active[static_cast<std::size_t>(k)]) continue;
                const int r = 16 * b + 5 * k;
                a_.row(r).setZero();
                a_(r, r) = 1.0;
            }
        lu_.compute(a_);
        lu_.setThreshold(1e-13);
        if (lu_.rank() < n_) throw SolverError(describe_zero_mode());
    }

    int size() const { return n_; }
    int trace_row() const { return 16 * order_; }

    /// Zero the constrained rows of a right-hand side.
    void constrain(Eigen::VectorXcd& b, cplx trace_value) const {
        b(trace_row()) = trace_value;
        for (int blk = 0; blk < 2 * order_ + 1; ++blk)
            for (int k = 0; k < 4; ++k)
                if (!g_.active[static_cast<std::size_t>(k)]) b(16 * blk + 5 * k) = 0.0;
    }

    Eigen::VectorXcd solve(const Eigen::VectorXcd& b, double& residual) const {
        Eigen::VectorXcd x = lu_.solve(b);
        const double denom = a_.norm() * x.norm() + b.norm();
        residual = denom > 0.0 ? (a_ * x - b).norm() / denom : 0.0;
        return x;
    }

    HarmonicState unpack(const Eigen::VectorXcd& x) const {
        HarmonicState s;
        s.order = order_;
        s.omega_m = g_.omega;
        for (int b = 0; b < 2 * order_ + 1; ++b)
            s.blocks.push_back(unvec(x.segment<16>(16 * b)));
        return s;
    }

private:
    std::string describe_zero_mode() const {
        const Eigen::MatrixXcd ker = lu_.kernel();
        Eigen::Index idx = 0;
        ker.col(0).cwiseAbs().maxCoeff(&idx);
        const int b = static_cast<int>(idx) / 16;
        const int e = static_cast<int>(idx) % 16;
        std::ostringstream os;
        os << "singular harmonic-balance system (rank " << lu_.rank() << " of " << n_
           << "): zero mode dominated by rho_" << e / 4 + 1 << e % 4 + 1 << " at harmonic "
           << b - order_ << "; the steady state is not unique";
        return os.str();
    }

    const PeriodicGenerator& g_;
    int order_;
    int n_ = 0;
    Eigen::MatrixXcd a_;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu_;
};

HarmonicState pad(const HarmonicState& s, int order) {
    HarmonicState out;
    out.order = order;
    out.omega_m = s.omega_m;
    for (int l = -order; l <= order; ++l) out.blocks.push_back(s.harmonic(l));
    return out;
}

FloquetResult solve_order(const PeriodicGenerator& g, int order, double tol) {
    const int effective = is_modulated(g) ? order : 0;
    Assembled sys(g, effective);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(sys.size());
    sys.constrain(b, 1.0);
    FloquetResult r;
    const Eigen::VectorXcd x = sys.solve(b, r.residual);
    if (!(r.residual <= tol)) {
        std::ostringstream os;
        os << "harmonic-balance residual " << r.residual << " exceeds " << tol;
        throw SolverError(os.str());
    }
    r.state = pad(sys.unpack(x), order);
    r.state.omega_m = g.omega;
    return r;
}

}  // namespace

PeriodicGenerator sideband_generator(const EngineParams& params, bool include_probe) {
    EngineParams p = params.normalized();
    if (!include_probe) p.Omega_pr = {};
    PeriodicGenerator g = static_generator(p, hamiltonian_dc(p));
    if (p.variant != EngineVariant::HE_pu) {
        const SidebandPair v = hamiltonian_sideband(p);
        g.Lplus = commutator_superop(v.plus);
        g.Lminus = commutator_superop(v.minus);
        g.omega = p.omega_m.as_two_pi_mhz();
    }
    return g;
}

PeriodicGenerator branch_generator(const EngineParams& params, int branch, bool include_probe) {
    EngineParams p = params.normalized();
    if (!include_probe) p.Omega_pr = {};
    return static_generator(p, hamiltonian_branch(p, branch));
}

FloquetResult solve_periodic(const PeriodicGenerator& g, const FloquetOptions& opt) {
    if (opt.harmonics < 0) throw ConfigError("harmonics", "truncation order must be >= 0");
    FloquetResult r = solve_order(g, opt.harmonics, opt.residual_tol);
    if (opt.check_truncation && is_modulated(g)) {
        const FloquetResult next = solve_order(g, opt.harmonics + 1, opt.residual_tol);
        const double shift = std::abs(next.state.element(1, 4, 0) - r.state.element(1, 4, 0));
        if (shift > 1e-8) {
            std::ostringstream os;
            os << "truncation order " << opt.harmonics << " too small: rho_14,0 changes by "
               << shift << " at order " << opt.harmonics + 1;
            r.warnings.push_back(os.str());
        }
    }
    return r;
}

FloquetResult solve_floquet(const EngineParams& p, const FloquetOptions& opt) {
    std::vector<std::string> warnings = p.validate();
    const EngineParams n = p.normalized();
    if (n.epsilon > 0.0) {
        if (opt.harmonics < 1)
            throw ConfigError("harmonics", "at least one harmonic is required when epsilon > 0");
        if (n.omega_m.rad_s() == 0.0)
            throw ConfigError("omega_m", "must be nonzero when epsilon > 0");
    }
    FloquetResult r = solve_periodic(sideband_generator(n), opt);
    warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
    r.warnings = std::move(warnings);
    return r;
}

ProbeSplit probe_split(const PeriodicGenerator& g, int harmonics) {
    const int order = is_modulated(g) ? harmonics : 0;
    Assembled sys(g, order);
    ProbeSplit out;

    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(sys.size());
    sys.constrain(b, 1.0);
    double res0 = 0.0;
    const Eigen::VectorXcd x0 = sys.solve(b, res0);

    const Superop v = commutator_superop(unit_probe_hamiltonian());
    Eigen::VectorXcd b_abs = Eigen::VectorXcd::Zero(sys.size());
    Eigen::VectorXcd b_em = Eigen::VectorXcd::Zero(sys.size());
    for (int blk = 0; blk < 2 * order + 1; ++blk) {
        Vector16c part = x0.segment<16>(16 * blk);
        Vector16c abs_part = Vector16c::Zero();
        abs_part(0) = part(0);
        b_abs.segment<16>(16 * blk) = -(v * abs_part);
        b_em.segment<16>(16 * blk) = -(v * (part - abs_part));
    }
    sys.constrain(b_abs, 0.0);
    sys.constrain(b_em, 0.0);
    double res_a = 0.0, res_e = 0.0;
    const Eigen::VectorXcd xa = sys.solve(b_abs, res_a);
    const Eigen::VectorXcd xe = sys.solve(b_em, res_e);

    out.zero_order = pad(sys.unpack(x0), harmonics);
    out.absorber = pad(sys.unpack(xa), harmonics);
    out.emitter = pad(sys.unpack(xe), harmonics);
    for (HarmonicState* s : {&out.zero_order, &out.absorber, &out.emitter}) s->omega_m = g.omega;
    out.residual = std::max({res0, res_a, res_e});
    if (!(out.residual <= 1e-10)) throw SolverError("probe response residual too large");
    return out;
}

ProbeSplit probe_split_sideband(const EngineParams& p, int harmonics) {
    return probe_split(sideband_generator(p, false), harmonics);
}

ProbeSplit probe_split_branch(const EngineParams& p, int branch) {
    return probe_split(branch_generator(p, branch, false), 0);
}

Trajectory evolve_time_domain(const EngineParams& params, double t_end, double dt, int stride) {
    params.validate();
    const EngineParams p = params.normalized();
    const PeriodicGenerator g = sideband_generator(p);
    const double g41 = p.dephasing().gamma41.as_two_pi_mhz();
    double bound = g41 > 0.0 ? 1.0 / g41 : std::numeric_limits<double>::infinity();
    if (g.omega != 0.0) bound = std::min(bound, 2.0 * std::numbers::pi / std::abs(g.omega));
    bound *= 0.01;
    if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12))
        throw ConfigError("dt", "time step must satisfy 0 < dt <= " + std::to_string(bound));
    if (!(t_end >= 0.0)) throw ConfigError("t_end", "must be non-negative");
    if (stride < 1) throw ConfigError("stride", "must be >= 1");

    Matrix4c rho0 = Matrix4c::Zero();
    int count = 0;
    for (bool a : g.active) count += a ? 1 : 0;
    for (int k = 0; k < 4; ++k)
        if (g.active[static_cast<std::size_t>(k)]) rho0(k, k) = 1.0 / count;

    auto rhs = [&g](double t, const Vector16c& v) -> Vector16c {
        Vector16c out = g.L0 * v;
        if (g.omega != 0.0) {
            out += std::polar(1.0, -g.omega * t) * (g.Lplus * v);
            out += std::polar(1.0, g.omega * t) * (g.Lminus * v);
        }
        return out;
    };

    const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
    Trajectory tr;
    tr.t.reserve(static_cast<std::size_t>(steps / stride + 2));
    tr.rho.reserve(tr.t.capacity());
    Vector16c v = vec(rho0);
    tr.t.push_back(0.0);
    tr.rho.push_back(rho0);
    for (long n = 0; n < steps; ++n) {
        const double t = n * dt;
        const Vector16c k1 = rhs(t, v);
        const Vector16c k2 = rhs(t + 0.5 * dt, v + 0.5 * dt * k1);
        const Vector16c k3 = rhs(t + 0.5 * dt, v + 0.5 * dt * k2);
        const Vector16c k4 = rhs(t + dt, v + dt * k3);
        v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((n + 1) % stride == 0 || n + 1 == steps) {
            tr.t.push_back((n + 1) * dt);
            tr.rho.push_back(unvec(v));
        }
    }
    return tr;
}

cplx trajectory_harmonic(const Trajectory& tr, int j, int k, int l, double omega, int periods) {
    if (tr.t.size() < 2) throw ConfigError("trajectory", "needs at least two samples");
    const std::size_t n = tr.t.size();
    const double h = tr.t[n - 1] - tr.t[n - 2];
    std::size_t count = 1;
    if (omega != 0.0) {
        const double period = 2.0 * std::numbers::pi / std::abs(omega);
        const double m = period / h;
        const double per = std::round(m);
        if (std::abs(m - per) > 1e-6 * per)
            throw ConfigError("dt", "sampling interval must divide the mirror period");
        count = static_cast<std::size_t>(per) * static_cast<std::size_t>(periods);
    } else {
        count = std::min<std::size_t>(n - 1, static_cast<std::size_t>(periods));
    }
    if (count + 1 > n) throw ConfigError("t_end", "trajectory shorter than the requested window");
    cplx acc = 0.0;
    for (std::size_t i = n - 1 - count; i < n - 1; ++i)
        acc += tr.rho[i](j - 1, k - 1) * std::polar(1.0, l * omega * tr.t[i]);
    return acc / static_cast<double>(count);
}

}  // namespace qhe
