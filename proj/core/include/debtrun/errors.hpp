#pragma once

#include <stdexcept>
#include <string>

namespace debtrun {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument or parameter lies outside its admissible domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A grid or run configuration cannot be used (e.g. the step matrix is not
/// diagonally dominant).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Newton iteration or adaptive quadrature failed to reach its tolerance.
class NonconvergenceError : public Error {
public:
    NonconvergenceError(const std::string& what, double last_increment, long slice = -1)
        : Error(what), last_increment_(last_increment), slice_(slice) {}

    double last_increment() const noexcept { return last_increment_; }
    long slice() const noexcept { return slice_; }

private:
    double last_increment_;
    long slice_;
};

/// A required upstream artifact (barrier curve, barrier file) is missing or
/// does not cover the requested range.
class DependencyError : public Error {
public:
    using Error::Error;
};

}  // namespace debtrun
