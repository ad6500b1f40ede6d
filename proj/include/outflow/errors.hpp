#pragma once

#include <stdexcept>
#include <string>

namespace outflow {

// Maps onto the CLI exit codes: config 1, physics/admissibility 2, numerical 3.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the thermodynamic or geometric domain of an operation.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sign condition the operation relies on (p_rho > 0, e_theta > 0, ...) fails.
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AdmissibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace outflow
