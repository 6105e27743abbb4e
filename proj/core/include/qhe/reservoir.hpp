#pragma once

#include "qhe/units.hpp"

#include <string_view>

namespace qhe {

enum class EngineVariant {
    HE_pu,   // levels 1,2,4: probe + pump, no mirror
    HE_c,    // levels 1,3,4: probe + mirror-modulated control
    HE_puc,  // full tripod: probe + pump + modulated control
};

std::string_view to_string(EngineVariant v);
/// Accepts "HE_pu", "HE_c", "HE_puc" (also "pu", "c", "puc"). Throws ConfigError otherwise.
EngineVariant parse_variant(std::string_view text);

/// True when ground level `level` (1, 2 or 3) takes part in the given variant.
bool has_level(EngineVariant v, int level);

struct ReservoirSpec {
    double T41 = 5000.0;
    double T42 = 5000.0;
    double T43 = 5000.0;
    AngularFrequency omega41 = AngularFrequency::from_rad_s(4e15);
    AngularFrequency omega42 = AngularFrequency::from_rad_s(3e15);
    AngularFrequency omega43 = AngularFrequency::from_rad_s(3e15);

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

struct DecayRates {
    AngularFrequency Gamma41 = mhz(5.7);
    AngularFrequency Gamma42 = mhz(5.7);
    AngularFrequency Gamma43 = mhz(5.7);
};

/// Incoherent pumping rates R_i4 from ground level i up to level 4.
struct PumpRates {
    AngularFrequency R14;
    AngularFrequency R24;
    AngularFrequency R34;
};

enum class Dephasing { g41, g42, g43, g21, g31, g32 };

struct DephasingSet {
    AngularFrequency gamma41, gamma42, gamma43;
    AngularFrequency gamma21, gamma31, gamma32;
    unsigned used_mask = 0;

    bool used(Dephasing d) const { return (used_mask >> static_cast<unsigned>(d)) & 1u; }
    AngularFrequency get(Dephasing d) const;
};

/// Planck occupation 1/(exp(hbar w / kB T) - 1).
double photon_occupation(AngularFrequency omega, double temperature_k);

AngularFrequency pump_rate(AngularFrequency gamma4i, double n4i);

/// R_i4 = Gamma_4i n_4i for the channels the variant couples; zero elsewhere.
PumpRates pump_rates(EngineVariant v, const ReservoirSpec& res, const DecayRates& decays);

/// Transition dephasing rates. Channels outside the variant contribute nothing and the
/// corresponding entries are zero and not flagged in `used_mask`.
DephasingSet dephasing_rates(EngineVariant v, const DecayRates& decays, const PumpRates& pumps);

}  // namespace qhe
