#pragma once

#include <stdexcept>
#include <string>

namespace hostpara {

/// Parameter or state outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation invoked on an input it does not accept (wrong model, wrong equilibrium kind).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Iterative solver failed to converge.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), lo_(lo), hi_(hi) {}
    explicit NumericError(const std::string& what) : NumericError(what, 0.0, 0.0) {}

    /// Last bracket (or last iterate in both slots) when the failure happened.
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

}  // namespace hostpara
