#pragma once

#include <stdexcept>
#include <string>

namespace iwal {

// Base for all contract violations raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Point dimension does not match what a hypothesis or marginal expects.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Malformed or out-of-range configuration values.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Exact computation requested on a distribution that only supports
// Monte Carlo estimation.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

} // namespace iwal
