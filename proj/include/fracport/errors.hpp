#ifndef FRACPORT_ERRORS_HPP
#define FRACPORT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracport {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (CSV parsing, window bounds).
class DataError : public Error {
public:
    using Error::Error;
};

/// Mismatched vector/matrix dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Floating-point domain violation (e.g. arccos argument out of range).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Solver divergence or a linear system that cannot be factorized.
class SolverError : public Error {
public:
    using Error::Error;
};

} // namespace fracport

#endif
