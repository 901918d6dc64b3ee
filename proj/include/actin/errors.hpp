#pragma once

#include <stdexcept>
#include <string>

namespace actin {

/// Invalid physical or mathematical input (bad geometry, charge map out of
/// branch domain, ...). Maps to CLI exit code 1.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration (bad indices, overlapping clamps, schema violations).
/// Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Failure during time integration (Newton divergence, NaN, invertibility
/// domain exceeded). Carries the simulation time and, when known, the cell.
/// Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& msg, double t_seconds, int cell = -1)
        : std::runtime_error(msg), t(t_seconds), cell(cell) {}

    double t;  ///< simulation time of the failure, seconds
    int cell;  ///< 1-based cell index, or -1 if not cell-specific
};

}  // namespace actin
