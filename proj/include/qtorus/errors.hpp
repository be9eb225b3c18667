#pragma once

#include <stdexcept>
#include <string>

namespace qtorus {

// Raised when a computed object breaks a physical contract beyond tolerance
// (trace, Hermiticity, positivity). The CLI maps it to exit code 3.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent scenario configuration. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(const std::string& field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace qtorus
