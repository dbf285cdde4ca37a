#pragma once

#include <stdexcept>
#include <string>

namespace qexp {

// Invalid or incomplete configuration. `key()` names the offending parameter.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& what)
        : std::invalid_argument(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// A computation produced a non-finite or undefined result.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double frequency_hz)
        : std::runtime_error(what), frequency_hz_(frequency_hz) {}
    double frequency_hz() const noexcept { return frequency_hz_; }

private:
    double frequency_hz_;
};

// The homodyne angle is orthogonal to the signal: H^T Z = 0.
class DegenerateReadout : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace qexp
