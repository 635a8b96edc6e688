#pragma once

#include <stdexcept>
#include <string>

namespace qtrace {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (bad arguments, unmet hypothesis).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Numeric evaluation left the admissible domain (division by zero, branch cut).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A construction failed a structural check, e.g. ellipticity at a witness point.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// An integrand failed the decay needed for an improper integral.
class DecayError : public Error {
public:
    using Error::Error;
};

class ContourError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class OracleError : public Error {
public:
    using Error::Error;
};

/// Singular resolvent solve: lambda sits on (or numerically at) an eigenvalue.
class SpectralCollision : public Error {
public:
    SpectralCollision(const std::string& what, double nearest_re, double nearest_im)
        : Error(what), nearest_re_(nearest_re), nearest_im_(nearest_im) {}
    double nearest_re() const noexcept { return nearest_re_; }
    double nearest_im() const noexcept { return nearest_im_; }

private:
    double nearest_re_;
    double nearest_im_;
};

/// Malformed configuration text; line/column are 1-based, 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line, int column)
        : Error(what), line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace qtrace
