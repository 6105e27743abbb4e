#include <catch_amalgamated.hpp>

#include "qhe/closed_form.hpp"
#include "qhe/floquet.hpp"
#include "qhe/observables.hpp"
#include "support/sampling.hpp"

#include <cmath>
#include <random>

using namespace qhe;
using Catch::Approx;

TEST_CASE("random draws: harmonic balance", "[properties]") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 200; ++i) {
        const EngineParams p = sampling::draw(rng);
        const FloquetResult r = solve_floquet(p);
        const HarmonicState& s = r.state;
        CHECK(r.residual <= 1e-10);
        CHECK(s.trace_error() <= 1e-12);
        CHECK(s.conjugation_error() <= 1e-12);
        CHECK(s.population_violation() <= 1e-12);
        for (double t : {0.0, 0.37, 1.9}) {
            const Matrix4c rho = s.at_time(t);
            CHECK((rho - rho.adjoint()).norm() <= 1e-12);
            CHECK(std::abs(rho.trace() - 1.0) <= 1e-12);
        }
        const auto active = active_levels(p.variant);
        for (int j = 0; j < 4; ++j)
            if (!active[static_cast<std::size_t>(j)])
                for (int l = -2; l <= 2; ++l) CHECK(s.harmonic(l).row(j).norm() == 0.0);
    }
}

TEST_CASE("random draws: closed-form response", "[properties]") {
    std::mt19937_64 rng(102);
    for (int i = 0; i < 500; ++i) {
        const EngineParams p = sampling::draw(rng);
        const ProbeHarmonicsSplit h = coherence_harmonics_split(p);
        const CoherenceHarmonics full = coherence_harmonics(p);
        CHECK(std::abs(h.absorber.rho14_dc + h.emitter.rho14_dc - full.rho14_dc) <=
              1e-12 * std::abs(full.rho14_dc) + 1e-300);
        CHECK(std::abs(h.absorber.rho14_plus + h.emitter.rho14_plus - full.rho14_plus) <=
              1e-12 * std::abs(full.rho14_dc) + 1e-300);

        // the ground-level absorber absorbs, the rest emits
        const ResponseCoefficients s = split_coefficients(p);
        if (p.Omega_pr.rad_s() > 0.0) CHECK(s.sigma_abs > 0.0);
        if (s.sigma_abs > s.sigma_em && s.sigma_em >= 0.0) {
            const Brightness b = brightness(s);
            CHECK(b.value >= 0.0);
            CHECK_FALSE(b.gain);
        }

        const ModulationResult m = modulation(p);
        CHECK(m.amplitude >= 0.0);
        CHECK(m.phase_alpha.has_value() == (m.amplitude > 0.0));
        if (m.phase_alpha) {
            CHECK(*m.phase_alpha > -M_PI);
            CHECK(*m.phase_alpha <= M_PI);
        }
    }
}

TEST_CASE("random draws: pump engine ignores the mirror branch", "[properties]") {
    std::mt19937_64 rng(103);
    int seen = 0;
    while (seen < 50) {
        const EngineParams p = sampling::draw(rng);
        if (p.variant != EngineVariant::HE_pu) continue;
        ++seen;
        const ResponseCoefficients a = split_coefficients_branch(p, +1, Method::ClosedForm);
        const ResponseCoefficients b = split_coefficients_branch(p, -1, Method::ClosedForm);
        CHECK(a.sigma_abs == b.sigma_abs);
        CHECK(a.sigma_em == b.sigma_em);
    }
}

TEST_CASE("random draws: DC spectrum is the mean of the branches", "[properties]") {
    std::mt19937_64 rng(104);
    for (int i = 0; i < 100; ++i) {
        const EngineParams p = sampling::draw(rng);
        const ResponseCoefficients avg = split_coefficients(p);
        const ResponseCoefficients a = split_coefficients_branch(p, +1, Method::ClosedForm);
        const ResponseCoefficients b = split_coefficients_branch(p, -1, Method::ClosedForm);
        CHECK(avg.sigma_abs == Approx(0.5 * (a.sigma_abs + b.sigma_abs)).epsilon(1e-14));
        CHECK(avg.sigma_em == Approx(0.5 * (a.sigma_em + b.sigma_em)).epsilon(1e-14).margin(1e-300));
    }
}

TEST_CASE("random draws: temperature and entropy bookkeeping", "[properties]") {
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> u(1e-4, 2.0);
    const ReservoirSpec res;
    for (int i = 0; i < 200; ++i) {
        const double b = u(rng), c = b * 1.1;
        CHECK(t_max(c, res.omega41, 5000.0) > t_max(b, res.omega41, 5000.0));
        // inverse of the Planck law
        const double T = 5000.0 * t_max(b, res.omega41, 5000.0);
        CHECK(photon_occupation(res.omega41, T) == Approx(b).epsilon(1e-12));
    }
    for (int i = 0; i < 100; ++i) {
        const EngineParams p = sampling::draw(rng);
        const EntropyBounds e = entropy_bounds(p.variant, p.reservoirs);
        CHECK(e.lower < e.upper);
    }
}
