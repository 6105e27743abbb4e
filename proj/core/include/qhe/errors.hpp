#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qhe {

/// Argument outside the mathematical domain of a formula (T <= 0, omega = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid or inconsistent configuration. `field()` names the offending input.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Operation requested for an engine variant that does not support it.
class VariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Failure of a linear solve or an integrator (singular system, residual too large).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qhe
