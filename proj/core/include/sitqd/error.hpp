// error.hpp — Exception types mapped onto the CLI exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace sitqd {

// Invalid or inconsistent configuration. `key` is the dotted key path when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Quadrature non-convergence, integration instability, NaN in the field.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double achieved_tolerance = 0.0)
        : std::runtime_error(what), achieved_tolerance_(achieved_tolerance) {}

    double achieved_tolerance() const noexcept { return achieved_tolerance_; }

private:
    double achieved_tolerance_;
};

// Query outside a tabulated domain; `axis` names the offending axis.
class RangeError : public std::out_of_range {
public:
    RangeError(std::string axis, const std::string& what)
        : std::out_of_range(axis + ": " + what), axis_(std::move(axis)) {}

    const std::string& axis() const noexcept { return axis_; }

private:
    std::string axis_;
};

// Polaron master equation used outside its validity bound (metric >= 1).
class ValidityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sitqd
