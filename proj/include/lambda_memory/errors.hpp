#pragma once

#include <stdexcept>
#include <string>

namespace lambda_memory {

/// Invalid argument to a library call (index out of range, dimension mismatch, bad value).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A documented precondition on an input object does not hold.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Inconsistent or unsupported model / run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Propagation left the physical state space beyond tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lambda_memory
