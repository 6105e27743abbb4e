#include <catch_amalgamated.hpp>

#include "qhe/engine.hpp"
#include "qhe/errors.hpp"
#include "support/oracle.hpp"
#include "support/sampling.hpp"

#include <cmath>
#include <random>

using namespace qhe;
using Catch::Approx;

namespace {

Matrix4c random_density(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix4c a;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) a(j, k) = cplx(n(rng), n(rng));
    Matrix4c rho = a * a.adjoint();
    return rho / rho.trace();
}

double upward_total(const DissipatorPair& d, int lower) {
    double s = 0.0;
    for (const auto* set : {&d.spontaneous, &d.thermal})
        for (const auto& c : set->channels)
            if (c.lower == lower) s += c.up;
    return s;
}

}  // namespace

TEST_CASE("static Hamiltonian entries", "[engine]") {
    SECTION("all fields off") {
        EngineParams p;
        p.variant = EngineVariant::HE_puc;
        CHECK(hamiltonian_dc(p).norm() == 0.0);
    }
    SECTION("pump engine entries") {
        EngineParams p;
        p.variant = EngineVariant::HE_pu;
        p.Delta_pr = mhz(1.0);
        p.Delta_pu = mhz(0.4);
        p.Omega_pr = mhz(0.2);
        p.Omega_pu = mhz(2.0);
        const Matrix4c h = hamiltonian_dc(p);
        CHECK(h(0, 0).real() == Approx(0.0).margin(1e-15));
        CHECK(h(1, 1).real() == Approx(0.6));
        CHECK(h(3, 3).real() == Approx(1.0));
        CHECK(h(0, 3).real() == Approx(-0.1));
        CHECK(h(1, 3).real() == Approx(-1.0));
        CHECK(h.row(2).norm() == 0.0);
        CHECK(h.col(2).norm() == 0.0);
    }
    SECTION("Hermitian for random draws") {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 100; ++i) {
            const EngineParams p = sampling::draw(rng);
            const Matrix4c h = hamiltonian_dc(p);
            CHECK((h - h.adjoint()).norm() == 0.0);
            for (int b : {+1, -1}) {
                const Matrix4c hb = hamiltonian_branch(p, b);
                CHECK((hb - hb.adjoint()).norm() == 0.0);
            }
        }
    }
}

TEST_CASE("mirror sidebands", "[engine]") {
    EngineParams p = EngineParams::defaults(EngineVariant::HE_c);
    p.Omega_c = mhz(2.0);
    p.epsilon = 0.01;
    const SidebandPair v = hamiltonian_sideband(p);
    CHECK(std::abs(v.plus(2, 3)) == Approx(0.005));
    CHECK(std::abs(v.minus(2, 3)) == Approx(0.005));
    CHECK(std::abs(v.plus(3, 2)) == Approx(0.005));
    Matrix4c masked = v.plus;
    masked(2, 3) = masked(3, 2) = 0.0;
    CHECK(masked.norm() == 0.0);
    CHECK((v.minus - v.plus.adjoint()).norm() == 0.0);

    p.epsilon = 0.0;
    const SidebandPair z = hamiltonian_sideband(p);
    CHECK(z.plus.norm() == 0.0);
    CHECK(z.minus.norm() == 0.0);

    CHECK_THROWS_AS(hamiltonian_sideband(EngineParams::defaults(EngineVariant::HE_pu)), VariantError);
}

TEST_CASE("mirror branch Hamiltonian", "[engine]") {
    EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
    p.Delta_pr = mhz(0.3);
    p.Delta_c = mhz(0.7);
    const double oc = p.Omega_c.as_two_pi_mhz();
    const double wm = p.omega_m.as_two_pi_mhz();
    for (int b : {+1, -1}) {
        const Matrix4c h = hamiltonian_branch(p, b);
        CHECK(h(2, 2).real() == Approx(0.3 - (0.7 - b * wm)));
        CHECK(h(2, 3).real() == Approx(-0.5 * oc * (1.0 + p.epsilon / 2.0)));
    }
}

TEST_CASE("dissipator channels", "[engine]") {
    auto lowers = [](const Dissipator& d) {
        std::vector<int> out;
        for (const auto& c : d.channels) out.push_back(c.lower);
        return out;
    };
    const auto pu = dissipators(EngineParams::defaults(EngineVariant::HE_pu));
    CHECK(lowers(pu.spontaneous) == std::vector<int>{1, 2});
    CHECK(lowers(pu.thermal) == std::vector<int>{1, 2});
    const auto c = dissipators(EngineParams::defaults(EngineVariant::HE_c));
    CHECK(lowers(c.thermal) == std::vector<int>{1, 3});
    const auto puc = dissipators(EngineParams::defaults(EngineVariant::HE_puc));
    CHECK(lowers(puc.thermal) == std::vector<int>{1, 2, 3});
    for (const auto& ch : puc.spontaneous.channels) {
        CHECK(ch.down == Approx(5.7));
        CHECK(ch.up == 0.0);
    }

    SECTION("upward rates equal the reservoir pumping rates") {
        const EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
        const PumpRates r = p.pumps();
        CHECK(upward_total(puc, 1) == Approx(r.R14.as_two_pi_mhz()).epsilon(1e-14));
        CHECK(upward_total(puc, 2) == Approx(r.R24.as_two_pi_mhz()).epsilon(1e-14));
        CHECK(upward_total(puc, 3) == Approx(r.R34.as_two_pi_mhz()).epsilon(1e-14));
    }

    SECTION("frozen reservoirs") {
        EngineParams p = EngineParams::defaults(EngineVariant::HE_puc);
        p.reservoirs.T41 = p.reservoirs.T42 = p.reservoirs.T43 = 1.0;
        const auto d = dissipators(p);
        for (int i = 1; i <= 3; ++i) CHECK(upward_total(d, i) == 0.0);
        for (const auto& ch : d.thermal.channels) CHECK(ch.down == 0.0);
        for (const auto& ch : d.spontaneous.channels) CHECK(ch.down == Approx(5.7));
    }
}

TEST_CASE("vectorization is row major", "[engine]") {
    Matrix4c a;
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) a(j, k) = cplx(j, k);
    const Vector16c v = vec(a);
    CHECK(v(4 * 2 + 1) == cplx(2, 1));
    CHECK(unvec(v) == a);
}

TEST_CASE("generator matches the reference master equation", "[engine]") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const EngineParams p = sampling::draw(rng);
        const Superop L = liouvillian(hamiltonian_dc(p), dissipators(p));
        const oracle::M16 ref = oracle::static_generator(oracle::build(p));
        CHECK((L - ref).norm() <= 1e-12 * ref.norm());
    }
}

TEST_CASE("generator preserves trace and Hermiticity", "[engine]") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const EngineParams p = sampling::draw(rng);
        const Superop L = liouvillian(hamiltonian_dc(p), dissipators(p));
        const Matrix4c rho = random_density(rng);
        const Matrix4c d = unvec(L * vec(rho));
        CHECK(std::abs(d.trace()) <= 1e-12 * L.norm());
        CHECK((d - d.adjoint()).norm() <= 1e-12 * L.norm());
    }
}

TEST_CASE("tripod reduces to the control engine", "[engine]") {
    EngineParams c = EngineParams::defaults(EngineVariant::HE_c);
    c.Delta_pr = mhz(0.4);
    c.Delta_c = mhz(-1.1);
    EngineParams puc = c;
    puc.variant = EngineVariant::HE_puc;
    puc.Omega_pu = AngularFrequency{};

    DissipatorPair d = dissipators(puc);
    for (Dissipator* set : {&d.spontaneous, &d.thermal})
        std::erase_if(set->channels, [](const DissipatorChannel& ch) { return ch.lower == 2; });
    const Superop full = liouvillian(hamiltonian_dc(puc), d);
    const Superop reduced = liouvillian(hamiltonian_dc(c), dissipators(c));
    const int keep[] = {0, 2, 3};
    for (int a : keep)
        for (int b : keep)
            for (int e : keep)
                for (int f : keep) CHECK(full(4 * a + b, 4 * e + f) == reduced(4 * a + b, 4 * e + f));

    SECTION("pump engine") {
        EngineParams pu = EngineParams::defaults(EngineVariant::HE_pu);
        pu.Delta_pu = mhz(0.25);
        EngineParams t = pu;
        t.variant = EngineVariant::HE_puc;
        t.Omega_c = AngularFrequency{};
        t.epsilon = 0.0;
        DissipatorPair dt = dissipators(t);
        for (Dissipator* set : {&dt.spontaneous, &dt.thermal})
            std::erase_if(set->channels, [](const DissipatorChannel& ch) { return ch.lower == 3; });
        const Superop a = liouvillian(hamiltonian_dc(t), dt);
        const Superop b = liouvillian(hamiltonian_dc(pu), dissipators(pu));
        const int k2[] = {0, 1, 3};
        for (int i : k2)
            for (int j : k2)
                for (int m : k2)
                    for (int n : k2) CHECK(a(4 * i + j, 4 * m + n) == b(4 * i + j, 4 * m + n));
    }
}

TEST_CASE("parameter defaults and validation", "[engine]") {
    const EngineParams d = EngineParams::defaults(EngineVariant::HE_puc);
    const double g = reference_gamma41(d.reservoirs, d.decays).as_two_pi_mhz();
    CHECK(g == Approx(17.2431).epsilon(1e-5));
    CHECK(d.Omega_pu.as_two_pi_mhz() == Approx(g));
    CHECK(d.Omega_c.as_two_pi_mhz() == Approx(g));
    CHECK(d.Omega_pr.as_two_pi_mhz() == Approx(0.05 * g));
    CHECK(d.epsilon == 0.01);
    CHECK(d.omega_m.as_two_pi_mhz() == 2.0);
    CHECK(d.validate().empty());

    const EngineParams pu = EngineParams::defaults(EngineVariant::HE_pu).normalized();
    CHECK(pu.epsilon == 0.0);
    CHECK(pu.omega_m.rad_s() == 0.0);
    CHECK(pu.Omega_c.rad_s() == 0.0);
    const EngineParams c = EngineParams::defaults(EngineVariant::HE_c).normalized();
    CHECK(c.Omega_pu.rad_s() == 0.0);

    auto field_of = [](const EngineParams& p) {
        try {
            p.validate();
        } catch (const ConfigError& e) {
            return e.field();
        }
        return std::string{};
    };
    EngineParams bad = d;
    bad.epsilon = -0.1;
    CHECK(field_of(bad) == "epsilon");
    bad = d;
    bad.reservoirs.T41 = -5.0;
    CHECK(field_of(bad) == "T41");
    bad = d;
    bad.decays.Gamma41 = mhz(-1.0);
    CHECK(field_of(bad) == "Gamma41");

    EngineParams loud = d;
    loud.epsilon = 0.5;
    CHECK_FALSE(loud.validate().empty());
    loud = d;
    loud.Omega_pr = 0.5 * d.Omega_pu;
    CHECK_FALSE(loud.validate().empty());
}
