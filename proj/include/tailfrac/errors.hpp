#pragma once

#include <stdexcept>

namespace tailfrac {

// Order statistics are tied where a location-invariant ratio needs a
// strictly positive denominator.
class tie_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Log-spacings carry no information (zero variance or zero denominator).
class degenerate_sample_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The two probe points of a second-order fit are linearly dependent.
class degenerate_probe_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// b_alpha(gamma) vanishes where a formula divides by it.
class null_bias_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// c * b_alpha(-rho) * b_alpha(gamma) has the wrong sign for the bias
// cancellation branch.
class sign_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A bracketing root search found no sign change.
class no_root_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent parameters/configuration.
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// More than the tolerated share of replications failed.
class excess_failure_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tailfrac
