#pragma once

#include <cmath>
#include <limits>
#include <optional>

namespace tailfrac {

// Sentinel for an exactly first-order tail: A(t) is identically zero and no
// finite rho applies. Consumers must branch on std::isfinite(rho) before
// using rho in arithmetic.
inline constexpr double kRhoExactTail = -std::numeric_limits<double>::infinity();

// Tail index gamma, second-order parameter rho, and the constant of
// A(t) ~ c t^rho. c is absent exactly when rho is the sentinel.
struct SecondOrderTriple {
    double gamma = 1.0;
    double rho = kRhoExactTail;
    std::optional<double> c;

    bool exact_first_order() const noexcept { return !std::isfinite(rho); }
};

}  // namespace tailfrac
