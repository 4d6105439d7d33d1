#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pimlab {

/// Raised when a caller breaks a documented precondition (size mismatch,
/// index out of range, invalid construction parameters).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the integrator when a step produces a non-finite value.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(std::size_t step_index, const std::string& what)
        : std::runtime_error(what), step_index_(step_index) {}

    std::size_t step_index() const noexcept { return step_index_; }

private:
    std::size_t step_index_;
};

/// Raised when constants of a nonlinearity are missing or cannot be certified.
class CertificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by configuration parsing; carries the offending key path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key_path, const std::string& what)
        : std::runtime_error(key_path + ": " + what), key_path_(std::move(key_path)) {}

    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

namespace detail {
inline void require(bool cond, const std::string& message) {
    if (!cond) throw ContractViolation(message);
}
}  // namespace detail

}  // namespace pimlab
