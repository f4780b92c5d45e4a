#pragma once

#include <stdexcept>
#include <string>

namespace rsnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid model parameter, range, index or shape.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Network generation could not produce a valid topology.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Linear solve failed or produced non-finite values.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, long step = -1)
        : Error(step >= 0 ? what + " (step " + std::to_string(step) + ")" : what),
          step_(step) {}

    [[nodiscard]] long step() const noexcept { return step_; }

private:
    long step_;
};

/// Malformed signal matrix, trace or input file contents.
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid or unknown run-configuration key.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace rsnet
