#pragma once

#include <stdexcept>
#include <string>

namespace fsim {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operator/state built with an unusable dimension (e.g. annihilation on dim < 2).
class DimensionError : public Error {
public:
    using Error::Error;
};

// Factor-order / shape mismatch between operands.
class LayoutError : public Error {
public:
    using Error::Error;
};

// Fock cutoff cannot carry the requested state (coherent tail above tolerance,
// fock index past the cutoff, population escaping to the top level at runtime).
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, int required_dim)
        : Error(what), required_dim(required_dim) {}
    int required_dim;  // smallest cutoff that would satisfy the tolerance, 0 if unknown
};

// A precondition on parameters is violated (asymmetric params for the reduced
// Hamiltonian, degenerate entangled target, non-invertible swap test, ...).
class ConditionError : public Error {
public:
    using Error::Error;
};

// Norm/trace/positivity drifted beyond tolerance during time evolution.
class IntegratorError : public Error {
public:
    IntegratorError(const std::string& what, double suggested_dt)
        : Error(what), suggested_dt(suggested_dt) {}
    double suggested_dt;
};

// Bad config file / CLI key or value.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fsim
