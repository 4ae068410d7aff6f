#pragma once

#include <stdexcept>
#include <string>

namespace fanoeit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed config, invariant violations on parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Anything that goes wrong while computing.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Evaluation requested on or too close to a pole.
class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace fanoeit
