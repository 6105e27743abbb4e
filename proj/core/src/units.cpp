#include "qhe/units.hpp"

#include "qhe/errors.hpp"

#include <cmath>

namespace qhe {

double thermal_exponent(AngularFrequency omega, double temperature_k) {
    if (!(temperature_k > 0.0) || !std::isfinite(temperature_k))
        throw DomainError("thermal_exponent: temperature must be positive");
    return PhysicalConstants::hbar * omega.rad_s() / (PhysicalConstants::kB * temperature_k);
}

}  // namespace qhe
