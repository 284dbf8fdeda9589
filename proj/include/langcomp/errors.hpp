#pragma once

#include <stdexcept>
#include <string>

namespace langcomp {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the operation's domain (bad index, bad value, shape mismatch).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Per-step renormalization needed a correction larger than the drift budget.
class StabilityError : public Error {
public:
    using Error::Error;
};

/// The integrated state became NaN or infinite.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A steady state was required but not reached within t_max.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Invalid search or run configuration (empty grid, bad ranges).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed dataset input. The message names the offending row/column.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure, with the path in the message.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace langcomp
