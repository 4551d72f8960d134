#pragma once

#include <stdexcept>
#include <string>

namespace treadmill {

/// Raised when an argument lies outside the domain of an operation
/// (non-positive stretch, point outside the shell, bad grid bounds, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Which of the two existence conditions a parameter set violates.
enum class Violation {
    none,
    accretion_speed_nonpositive,  // V* <= 0, i.e. muR1 <= muR0
    speed_order,                  // V* <= V**, i.e. mu_inf <= mu*
};

inline const char* describe(Violation v) {
    switch (v) {
    case Violation::none:
        return "solvable";
    case Violation::accretion_speed_nonpositive:
        return "V* <= 0 (requires muR1 > muR0)";
    case Violation::speed_order:
        return "V* <= V** (requires mu_inf > mu*)";
    }
    return "unknown";
}

/// The parameters admit no steady treadmilling state.
class NoTreadmillingState : public std::runtime_error {
public:
    explicit NoTreadmillingState(Violation v)
        : std::runtime_error(std::string("no treadmilling state: ") + describe(v)), violation_(v) {}

    Violation violation() const noexcept { return violation_; }

private:
    Violation violation_;
};

/// An iterative procedure failed to converge or to bracket a root.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace treadmill
