#pragma once

#include <stdexcept>
#include <string>

namespace flamefront {

/// Base of every error raised by the library. The C API maps each subclass
/// onto one status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a function (sample outside the grid, t > T).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid numerical parameter (eps <= 0, empty window, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Inconsistent solver or run configuration, detected before any stepping.
class ConfigError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Initial data that violates its own specification (support escapes B_M).
class SpecificationError : public Error {
public:
    using Error::Error;
};

class ProfileNotFoundError : public Error {
public:
    using Error::Error;
};

/// Extinction time requested from a run that never went extinct.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// The grid cannot resolve the requested quantity.
class InsufficientResolutionError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Fixture file missing, unparsable, or failing its checksum.
class FixtureIntegrityError : public Error {
public:
    using Error::Error;
};

}  // namespace flamefront
