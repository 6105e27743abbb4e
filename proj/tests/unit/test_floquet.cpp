#include <catch_amalgamated.hpp>

#include "qhe/closed_form.hpp"
#include "qhe/errors.hpp"
#include "qhe/floquet.hpp"
#include "support/oracle.hpp"
#include "support/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace qhe;
using Catch::Approx;

namespace {

double max_dev(const Matrix4c& a, const Matrix4c& b) { return (a - b).cwiseAbs().maxCoeff(); }

double sideband_norm(const HarmonicState& s) {
    return std::sqrt(s.harmonic(1).squaredNorm() + s.harmonic(-1).squaredNorm());
}

// Hot reservoirs relax the ground manifold quickly, so the reference integrator settles fast.
EngineParams hot_tripod() {
    EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
    p.reservoirs.T41 = p.reservoirs.T42 = p.reservoirs.T43 = 60000.0;
    p.epsilon = 0.05;
    p.omega_m = mhz(3.0);
    p.Delta_pr = mhz(0.8);
    p.Delta_c = mhz(-0.4);
    return p;
}

}  // namespace

TEST_CASE("unmodulated engine has a static steady state", "[floquet]") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        EngineParams p = sampling::draw(rng);
        p.epsilon = 0.0;
        const oracle::M4 ref = oracle::steady_state(oracle::build(p));
        for (int L : {0, 1, 2, 3}) {
            if (L == 0 && p.variant == EngineVariant::HE_pu) continue;
            const FloquetResult r = solve_floquet(p, {.harmonics = L});
            for (int l = 1; l <= L; ++l) {
                CHECK(r.state.harmonic(l).norm() == 0.0);
                CHECK(r.state.harmonic(-l).norm() == 0.0);
            }
            CHECK(max_dev(r.state.harmonic(0), ref) <= 1e-11);
        }
    }
}

TEST_CASE("zero fields give detailed-balance populations", "[floquet]") {
    EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
    p.Omega_pr = p.Omega_pu = p.Omega_c = AngularFrequency{};
    const FloquetResult r = solve_floquet(p);
    const auto& res = p.reservoirs;
    const double n[] = {photon_occupation(res.omega41, res.T41),
                        photon_occupation(res.omega42, res.T42),
                        photon_occupation(res.omega43, res.T43)};
    const double r44 = r.state.element(4, 4, 0).real();
    for (int i = 0; i < 3; ++i) {
        const double rii = r.state.element(i + 1, i + 1, 0).real();
        CHECK(r44 / rii == Approx(n[i] / (n[i] + 1.0)).epsilon(1e-10));
    }

    const ClosedFormPieces c = populations(p);
    CHECK(c.rho11 == Approx(r.state.element(1, 1, 0).real()).epsilon(1e-10));
    CHECK(c.rho22 == Approx(r.state.element(2, 2, 0).real()).epsilon(1e-10));
    CHECK(c.rho33 == Approx(r.state.element(3, 3, 0).real()).epsilon(1e-10));
    CHECK(c.rho44 == Approx(r44).epsilon(1e-10));
}

TEST_CASE("truncation converges at the reference operating point", "[floquet]") {
    const EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
    const FloquetResult r2 = solve_floquet(p, {.harmonics = 2});
    const FloquetResult r3 = solve_floquet(p, {.harmonics = 3});
    for (int l : {-1, 1}) {
        const cplx a = r2.state.element(1, 4, l), b = r3.state.element(1, 4, l);
        CHECK(sampling::rel_err(a, b) <= 1e-8);
    }
    CHECK(r2.residual <= 1e-10);
    const FloquetResult checked = solve_floquet(p, {.harmonics = 2, .check_truncation = true});
    CHECK(checked.warnings.empty());
}

TEST_CASE("coarse truncation at large modulation is reported", "[floquet]") {
    EngineParams p = EngineParams::defaults(EngineVariant::HE_c);
    p.epsilon = 0.8;
    p.omega_m = mhz(0.5);
    p.Omega_c = 2.0 * p.Omega_c;
    const FloquetResult r = solve_floquet(p, {.harmonics = 1, .check_truncation = true});
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("harmonic state invariants", "[floquet]") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 60; ++i) {
        const EngineParams p = sampling::draw(rng);
        const FloquetResult r = solve_floquet(p);
        CHECK(r.residual <= 1e-10);
        CHECK(r.state.conjugation_error() <= 1e-12);
        CHECK(r.state.trace_error() <= 1e-12);
        CHECK(r.state.population_violation() <= 1e-12);
        const double period = p.omega_m.rad_s() > 0.0 ? 2.0 * std::numbers::pi / p.omega_m.as_two_pi_mhz() : 1.0;
        for (int k = 0; k < 32; ++k) {
            const Matrix4c rho = r.state.at_time(period * k / 32.0);
            Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
            CHECK(es.eigenvalues().minCoeff() >= -1e-9);
        }
    }
}

TEST_CASE("harmonics agree with a direct integration of the master equation", "[floquet]") {
    const EngineParams p = hot_tripod();
    const oracle::Model m = oracle::build(p);
    const auto ref = oracle::periodic_harmonics(m, 8.0, 2, 4000);
    const FloquetResult r = solve_floquet(p, {.harmonics = 3});
    for (int l = -2; l <= 2; ++l)
        CHECK(max_dev(r.state.harmonic(l), ref[static_cast<std::size_t>(l + 2)]) <= 1e-8);
}

TEST_CASE("sideband response is linear in the modulation depth", "[floquet]") {
    EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
    std::vector<double> x, y;
    for (double eps : {1e-4, 1e-3, 1e-2}) {
        p.epsilon = eps;
        x.push_back(std::log(eps));
        y.push_back(std::log(sideband_norm(solve_floquet(p).state)));
    }
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double slope = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        CHECK(slope == Approx(1.0).margin(0.05));
    }
}

TEST_CASE("rank-deficient systems are rejected", "[floquet]") {
    EngineParams p;
    p.variant = EngineVariant::HE_puc;
    p.decays = {AngularFrequency{}, AngularFrequency{}, AngularFrequency{}};
    CHECK_THROWS_AS(solve_floquet(p), SolverError);
    try {
        solve_floquet(p);
    } catch (const SolverError& e) {
        CHECK(std::string(e.what()).find("rho") != std::string::npos);
    }

    EngineParams q = EngineParams::defaults(EngineVariant::HE_c);
    CHECK_THROWS_AS(solve_floquet(q, {.harmonics = 0}), ConfigError);
}

TEST_CASE("time-domain integrator", "[floquet][time]") {
    SECTION("pump engine settles on the harmonic-balance value") {
        const EngineParams p = EngineParams::defaults(EngineVariant::HE_pu);
        const double g = p.dephasing().gamma41.as_two_pi_mhz();
        const double dt = 0.01 / g;
        const Trajectory tr = evolve_time_domain(p, 50.0 / g, dt, 100);
        const cplx dc = solve_floquet(p).state.element(1, 4, 0);
        CHECK(std::abs(tr.rho.back()(0, 3).imag() - dc.imag()) <= 1e-6);
        CHECK(std::abs(tr.rho.back().trace() - 1.0) <= 1e-9 * tr.t.back());
    }
    SECTION("control engine oscillates at the mirror frequency") {
        EngineParams p = EngineParams::defaults(EngineVariant::HE_c);
        const double w = p.omega_m.as_two_pi_mhz();
        const double period = 2.0 * std::numbers::pi / w;
        const double g = p.dephasing().gamma41.as_two_pi_mhz();
        const int per_period = static_cast<int>(std::ceil(period / (0.01 * std::min(period, 1.0 / g))));
        const double dt = period / per_period;
        const Trajectory tr = evolve_time_domain(p, 400.0, dt, 1);
        const HarmonicState s = solve_floquet(p).state;
        for (int l : {-1, 1})
            CHECK(std::abs(trajectory_harmonic(tr, 1, 4, l, w, 20) - s.element(1, 4, l)) <= 1e-5);
    }
    SECTION("closed system without fields is frozen") {
        EngineParams p;
        p.variant = EngineVariant::HE_puc;
        p.decays = {AngularFrequency{}, AngularFrequency{}, AngularFrequency{}};
        const Trajectory tr = evolve_time_domain(p, 5.0, 0.01, 50);
        for (const Matrix4c& rho : tr.rho) CHECK(max_dev(rho, tr.rho.front()) == 0.0);
    }
    SECTION("step size must resolve the dynamics") {
        const EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
        try {
            evolve_time_domain(p, 1.0, 0.1);
            FAIL("expected a configuration error");
        } catch (const ConfigError& e) {
            CHECK(e.field() == "dt");
        }
    }
}
