#pragma once

#include <compare>
#include <numbers>

namespace qhe {

/// CODATA 2018 values, SI units.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;  // J s
    static constexpr double kB = 1.380649e-23;       // J / K
    static constexpr double c = 2.99792458e8;        // m / s
};

/// An angular frequency stored in rad/s.
///
/// Optical-scale quantities (Rabi frequencies, detunings, rates, mirror frequency)
/// are quoted in units of 2pi x MHz; `from_two_pi_mhz(1.0)` is 2pi x 1e6 rad/s.
class AngularFrequency {
public:
    constexpr AngularFrequency() = default;

    static constexpr AngularFrequency from_rad_s(double w) { return AngularFrequency(w); }
    static constexpr AngularFrequency from_two_pi_hz(double f) {
        return AngularFrequency(f * two_pi);
    }
    static constexpr AngularFrequency from_two_pi_mhz(double f) {
        return AngularFrequency(f * two_pi_mhz);
    }

    constexpr double rad_s() const { return value_; }
    constexpr double as_two_pi_hz() const { return value_ / two_pi; }
    constexpr double as_two_pi_mhz() const { return value_ / two_pi_mhz; }

    constexpr AngularFrequency operator-() const { return AngularFrequency(-value_); }
    constexpr AngularFrequency& operator+=(AngularFrequency o) {
        value_ += o.value_;
        return *this;
    }
    constexpr AngularFrequency& operator-=(AngularFrequency o) {
        value_ -= o.value_;
        return *this;
    }
    friend constexpr AngularFrequency operator+(AngularFrequency a, AngularFrequency b) {
        return a += b;
    }
    friend constexpr AngularFrequency operator-(AngularFrequency a, AngularFrequency b) {
        return a -= b;
    }
    friend constexpr AngularFrequency operator*(double s, AngularFrequency a) {
        return AngularFrequency(s * a.value_);
    }
    friend constexpr AngularFrequency operator*(AngularFrequency a, double s) {
        return AngularFrequency(s * a.value_);
    }
    friend constexpr AngularFrequency operator/(AngularFrequency a, double s) {
        return AngularFrequency(a.value_ / s);
    }
    friend constexpr double operator/(AngularFrequency a, AngularFrequency b) {
        return a.value_ / b.value_;
    }
    friend constexpr auto operator<=>(AngularFrequency, AngularFrequency) = default;

private:
    static constexpr double two_pi = 2.0 * std::numbers::pi;
    static constexpr double two_pi_mhz = 2.0 * std::numbers::pi * 1e6;

    constexpr explicit AngularFrequency(double w) : value_(w) {}
    double value_ = 0.0;
};

/// Shorthand for AngularFrequency::from_two_pi_mhz.
constexpr AngularFrequency mhz(double f) { return AngularFrequency::from_two_pi_mhz(f); }

/// hbar * omega / (kB * T), omega taken in rad/s. Throws DomainError for T <= 0.
double thermal_exponent(AngularFrequency omega, double temperature_k);

}  // namespace qhe
