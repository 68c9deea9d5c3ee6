#pragma once

#include <stdexcept>
#include <string>

namespace qtt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter is outside its domain.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A sampling grid cannot represent the requested function.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Two mode functions live on different grids or carrier representations.
class GridMismatch : public Error {
public:
    using Error::Error;
};

/// Pump power at or above the oscillation threshold.
class AboveThreshold : public Error {
public:
    using Error::Error;
};

/// Not enough samples for the requested spectral averaging.
class InsufficientData : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidParameter(what);
}

}  // namespace detail
}  // namespace qtt
