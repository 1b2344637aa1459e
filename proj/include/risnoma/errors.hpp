#pragma once

#include <stdexcept>
#include <string>

namespace risnoma {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to converge.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration or request field violates its constraints.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field))
    {
    }
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace risnoma
