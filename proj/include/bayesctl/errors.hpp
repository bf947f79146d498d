#pragma once

#include <stdexcept>
#include <string>

namespace bayesctl {

// Input outside the domain of a closed form (e.g. an unstable closed loop
// passed to the infinite-horizon cost).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed or invalid configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Base for numerical failures (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IterationLimitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class MonotonicityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Laplace fit could not find a strict interior maximum with negative curvature.
class LaplaceFitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace bayesctl
