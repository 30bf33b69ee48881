#include <tailfrac/inference.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

#include <tailfrac/asymptotics.hpp>

namespace tailfrac {

ConfidenceInterval ci_scaled(double estimate, int k0, double variance_factor, double level,
                             ConfidenceInterval::Kind kind) {
    if (!(estimate > 0.0)) throw std::domain_error("interval needs a positive point estimate");
    if (k0 < 1) throw std::domain_error("interval needs k0 >= 1");
    if (!(level > 0.0 && level < 1.0)) throw std::domain_error("level must lie in (0, 1)");
    const double z = z_quantile((1.0 - level) / 2.0);
    const double half = std::sqrt(variance_factor / k0) * z;

    ConfidenceInterval ci;
    ci.level = level;
    ci.kind = kind;
    ci.lower = estimate / (1.0 + half);
    if (1.0 - half > 0.0) {
        ci.upper = estimate / (1.0 - half);
    } else {
        ci.upper = std::numeric_limits<double>::infinity();
        ci.unbounded_above = true;
    }
    return ci;
}

ConfidenceInterval ci_fraga_alves(double gamma_tilde, int k0, double level) {
    return ci_scaled(gamma_tilde, k0, 1.0, level, ConfidenceInterval::Kind::FragaAlves);
}

ConfidenceInterval ci_new(double gamma_hat_value, int k0, double alpha, double level) {
    return ci_scaled(gamma_hat_value, k0, v_alpha(alpha), level,
                     ConfidenceInterval::Kind::NewFamily);
}

}  // namespace tailfrac
