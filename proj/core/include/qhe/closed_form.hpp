#pragma once

#include "qhe/engine.hpp"

#include <optional>

namespace qhe {

/// Rate-equation populations and the analytic response denominators of one mirror branch.
struct ClosedFormPieces {
    cplx G;
    cplx F;
    double X = 0.0;  // effective 2 <-> 4 rate: pumping plus coherent pump transfer
    double Y = 0.0;  // effective 3 <-> 4 rate: pumping plus coherent control transfer
    double rho11 = 0.0, rho22 = 0.0, rho33 = 0.0, rho44 = 0.0;
};

/// Populations from detailed balance of the incoherent rates with the coherent transfer
/// folded into X and Y, evaluated for mirror branch +1 or -1. Levels outside the variant
/// are dropped from the balance. Throws DomainError on a vanishing normalization.
ClosedFormPieces populations(const EngineParams& p, int branch = +1);

/// G and F of branch +1 or -1, rates in 2pi x MHz.
struct Denominators {
    cplx G;
    cplx F;
};
Denominators response_denominators(const EngineParams& p, int branch);

/// Coherences in the probe-emission labelling: rho14 = <4|rho|1> (positive imaginary part
/// in absorption) and rho43 = <3|rho|4>. `plus` multiplies exp(-i omega_m t).
struct CoherenceHarmonics {
    cplx rho14_dc;
    cplx rho14_plus;
    cplx rho14_minus;
    cplx rho43_plus;
    cplx rho43_minus;
};

enum class HarmonicsModel {
    /// First order in Omega_pr and epsilon, including population harmonics and the
    /// pump/control Raman coherences.
    Perturbative,
    /// The two coupled printed expressions for rho14,+- and rho43,+-, with the nested
    /// (epsilon / 2F) prefactor in the rho43 source.
    LiteralNested,
    /// As LiteralNested with the prefactor reduced to a single epsilon / 2.
    LiteralSingleF,
};

CoherenceHarmonics coherence_harmonics(const EngineParams& p,
                                       HarmonicsModel model = HarmonicsModel::Perturbative);

/// Absorber (rho11-driven) and emitter parts of the probe coherence harmonics.
struct ProbeHarmonicsSplit {
    CoherenceHarmonics absorber;
    CoherenceHarmonics emitter;
};
ProbeHarmonicsSplit coherence_harmonics_split(const EngineParams& p,
                                              HarmonicsModel model = HarmonicsModel::Perturbative);

/// Linear DC probe response <4|rho|1> per unit Omega_pr for one mirror branch, split into the
/// absorber and emitter parts.
struct DcResponse {
    cplx absorber;
    cplx emitter;
};
DcResponse dc_probe_response(const EngineParams& p, int branch);

/// Im[rho14^em](t) = Im[rho14,0^em] + amplitude cos(omega_m t + phase).
struct ModulationResult {
    double amplitude = 0.0;
    std::optional<double> phase_alpha;  // radians in (-pi, pi]; absent when amplitude is 0
};

ModulationResult modulation_from(const CoherenceHarmonics& emitter);
ModulationResult modulation(const EngineParams& p,
                            HarmonicsModel model = HarmonicsModel::Perturbative);

}  // namespace qhe
