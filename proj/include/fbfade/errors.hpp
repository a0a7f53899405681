#pragma once

#include <stdexcept>
#include <string>

namespace fbfade {

/// Invalid parameter or argument outside the admissible domain. `field()` names the offender.
class DomainError : public std::domain_error {
public:
    DomainError(std::string field, const std::string& what)
        : std::domain_error(field + ": " + what), field_(std::move(field)) {}
    explicit DomainError(const std::string& field) : DomainError(field, "out of domain") {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// An iterative scheme exhausted its term or node budget without meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Overflow, loss of significance or an inconsistent intermediate result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fbfade
