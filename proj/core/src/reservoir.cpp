#include "qhe/reservoir.hpp"

#include "qhe/errors.hpp"

#include <cmath>
#include <string>

namespace qhe {

std::string_view to_string(EngineVariant v) {
    switch (v) {
    case EngineVariant::HE_pu: return "HE_pu";
    case EngineVariant::HE_c: return "HE_c";
    case EngineVariant::HE_puc: return "HE_puc";
    }
    return "?";
}

EngineVariant parse_variant(std::string_view text) {
    if (text == "HE_pu" || text == "pu") return EngineVariant::HE_pu;
    if (text == "HE_c" || text == "c") return EngineVariant::HE_c;
    if (text == "HE_puc" || text == "puc" || text == "HE_pu,c") return EngineVariant::HE_puc;
    throw ConfigError("variant", "unknown engine variant '" + std::string(text) + "'");
}

bool has_level(EngineVariant v, int level) {
    switch (level) {
    case 1:
    case 4: return true;
    case 2: return v != EngineVariant::HE_c;
    case 3: return v != EngineVariant::HE_pu;
    default: return false;
    }
}

void ReservoirSpec::validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(T41)) throw ConfigError("T41", "temperature must be positive");
    if (!positive(T42)) throw ConfigError("T42", "temperature must be positive");
    if (!positive(T43)) throw ConfigError("T43", "temperature must be positive");
    if (!positive(omega41.rad_s())) throw ConfigError("omega_41_rad_s", "must be positive");
    if (!positive(omega42.rad_s())) throw ConfigError("omega_42_rad_s", "must be positive");
    if (!positive(omega43.rad_s())) throw ConfigError("omega_43_rad_s", "must be positive");
    if (!(omega41 > omega42)) throw ConfigError("omega_42_rad_s", "must lie below omega_41");
    if (!(omega41 > omega43)) throw ConfigError("omega_43_rad_s", "must lie below omega_41");
}

AngularFrequency DephasingSet::get(Dephasing d) const {
    switch (d) {
    case Dephasing::g41: return gamma41;
    case Dephasing::g42: return gamma42;
    case Dephasing::g43: return gamma43;
    case Dephasing::g21: return gamma21;
    case Dephasing::g31: return gamma31;
    case Dephasing::g32: return gamma32;
    }
    return {};
}

double photon_occupation(AngularFrequency omega, double temperature_k) {
    if (!(omega.rad_s() > 0.0))
        throw DomainError("photon_occupation: frequency must be positive");
    return 1.0 / std::expm1(thermal_exponent(omega, temperature_k));
}

AngularFrequency pump_rate(AngularFrequency gamma4i, double n4i) { return n4i * gamma4i; }

PumpRates pump_rates(EngineVariant v, const ReservoirSpec& res, const DecayRates& decays) {
    PumpRates p;
    p.R14 = pump_rate(decays.Gamma41, photon_occupation(res.omega41, res.T41));
    if (has_level(v, 2)) p.R24 = pump_rate(decays.Gamma42, photon_occupation(res.omega42, res.T42));
    if (has_level(v, 3)) p.R34 = pump_rate(decays.Gamma43, photon_occupation(res.omega43, res.T43));
    return p;
}

DephasingSet dephasing_rates(EngineVariant v, const DecayRates& decays, const PumpRates& pumps) {
    const bool l2 = has_level(v, 2);
    const bool l3 = has_level(v, 3);

    // Spontaneous part summed over the channels present, thermal part per level.
    AngularFrequency spont = decays.Gamma41;
    if (l2) spont += decays.Gamma42;
    if (l3) spont += decays.Gamma43;
    const AngularFrequency r1 = pumps.R14;
    const AngularFrequency r2 = l2 ? pumps.R24 : AngularFrequency{};
    const AngularFrequency r3 = l3 ? pumps.R34 : AngularFrequency{};
    const AngularFrequency thermal = r1 + r2 + r3;

    auto bit = [](Dephasing d) { return 1u << static_cast<unsigned>(d); };

    DephasingSet g;
    g.gamma41 = spont + thermal + r1;
    g.used_mask |= bit(Dephasing::g41);
    if (l2) {
        g.gamma42 = spont + thermal + r2;
        g.gamma21 = r1 + r2;
        g.used_mask |= bit(Dephasing::g42) | bit(Dephasing::g21);
    }
    if (l3) {
        g.gamma43 = spont + thermal + r3;
        g.gamma31 = r1 + r3;
        g.used_mask |= bit(Dephasing::g43) | bit(Dephasing::g31);
    }
    if (l2 && l3) {
        g.gamma32 = r2 + r3;
        g.used_mask |= bit(Dephasing::g32);
    }
    return g;
}

}  // namespace qhe
