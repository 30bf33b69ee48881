#pragma once

namespace tailfrac {

// z with 1 - Phi(z) = theta_half for theta_half in (0, 1/2).
// Wichura's AS241 rational approximation.
double z_quantile(double theta_half);

/// Asymptotic confidence interval for the tail index. When the denominator
/// 1 - z * scale is non-positive the interval is unbounded above; coverage
/// checks then only test the lower bound.
struct ConfidenceInterval {
    enum class Kind { FragaAlves, NewFamily };

    double lower = 0.0;
    double upper = 0.0;  // +infinity when unbounded_above
    double level = 0.0;
    Kind kind = Kind::FragaAlves;
    bool unbounded_above = false;

    bool contains(double gamma) const noexcept {
        return unbounded_above ? gamma >= lower : (lower <= gamma && gamma <= upper);
    }
    double length() const noexcept { return upper - lower; }
};

// Shared core: half-width factor sqrt(variance_factor / k0) * z_{theta/2}.
ConfidenceInterval ci_scaled(double estimate, int k0, double variance_factor, double level,
                             ConfidenceInterval::Kind kind);

// Interval around the location-invariant Hill-type estimate (unit variance
// factor).
ConfidenceInterval ci_fraga_alves(double gamma_tilde, int k0, double level);

// Interval around the tuned-family estimate; the variance factor is
// V_alpha evaluated at the alpha actually used.
ConfidenceInterval ci_new(double gamma_hat_value, int k0, double alpha, double level);

}  // namespace tailfrac
