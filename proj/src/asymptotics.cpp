#include <tailfrac/asymptotics.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

#include <tailfrac/errors.hpp>

namespace tailfrac {

namespace {

// |b_alpha| below this counts as null bias for the formulas that divide by it.
constexpr double kNullBiasTol = 1e-12;

void check_alpha_ge_one(double alpha, const char* who) {
    if (!(alpha >= 1.0)) {
        throw std::domain_error(std::string(who) + " requires alpha >= 1, got " +
                                std::to_string(alpha));
    }
}

void check_gamma_positive(double gamma, const char* who) {
    if (!(gamma > 0.0)) {
        throw std::domain_error(std::string(who) + " requires gamma > 0, got " +
                                std::to_string(gamma));
    }
}

void check_context(const AsymptoticContext& ctx, const char* who) {
    check_gamma_positive(ctx.gamma, who);
    check_alpha_ge_one(ctx.alpha, who);
    if (std::isfinite(ctx.rho) && !(ctx.rho < 0.0)) {
        throw std::domain_error(std::string(who) + " requires rho < 0 when finite");
    }
}

double require_c(const AsymptoticContext& ctx, const char* who) {
    if (!std::isfinite(ctx.rho)) {
        throw parameter_error(std::string(who) + " needs a finite rho");
    }
    if (!ctx.c.has_value() || *ctx.c == 0.0) {
        throw parameter_error(std::string(who) + " needs a nonzero second-order constant c");
    }
    return *ctx.c;
}

}  // namespace

double sigma_alpha(double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("sigma_alpha requires alpha > 0");
    const double g1 = gamma_fn(alpha + 1.0);
    const double variance = gamma_fn(2.0 * alpha + 1.0) - g1 * g1;
    return std::sqrt(std::max(variance, 0.0));
}

double mu_gamma_ratio(double alpha, double rho) {
    if (!(rho < 1.0) || rho == 0.0) {
        throw std::domain_error("mu_gamma_ratio requires rho < 1 and rho != 0");
    }
    return (std::pow(1.0 - rho, -alpha) - 1.0) / rho;
}

double mu_alpha(double alpha, double rho) {
    if (!(alpha > 0.0)) throw std::domain_error("mu_alpha requires alpha > 0");
    return gamma_fn(alpha) * mu_gamma_ratio(alpha, rho);
}

double v_alpha(double alpha) {
    check_alpha_ge_one(alpha, "v_alpha");
    const double g_a = gamma_fn(alpha);
    const double g_2a = gamma_fn(2.0 * alpha);
    return 0.25 * (gamma_fn(4.0 * alpha) / (alpha * g_2a * g_2a) +
                   4.0 * gamma_fn(2.0 * alpha - 1.0) / (g_a * g_a) -
                   2.0 * gamma_fn(3.0 * alpha) / (alpha * g_a * g_2a) - 1.0);
}

double b_alpha(double alpha, double gamma) {
    if (!(gamma >= 0.0)) throw std::domain_error("b_alpha requires gamma >= 0");
    const double base = 1.0 + gamma;
    return std::pow(base, 1.0 - alpha) - 0.5 * std::pow(base, -2.0 * alpha) - 0.5;
}

double alpha0(double gamma) {
    check_gamma_positive(gamma, "alpha0");
    const double base = 1.0 + gamma;
    return std::log(base + std::sqrt(base * base - 1.0)) / std::log(base);
}

double alpha0_bisect(double gamma) {
    check_gamma_positive(gamma, "alpha0_bisect");
    double lo = 1.0, hi = 64.0;
    double f_lo = b_alpha(lo, gamma);
    double f_hi = b_alpha(hi, gamma);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        throw no_root_error("b_alpha has no sign change on [1, 64]");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double f_mid = b_alpha(mid, gamma);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double areff(double alpha, double gamma) {
    check_gamma_positive(gamma, "areff");
    check_alpha_ge_one(alpha, "areff");
    const double b = b_alpha(alpha, gamma);
    if (std::fabs(b) <= kNullBiasTol) {
        throw null_bias_error("areff is undefined where b_alpha(gamma) vanishes");
    }
    const double expo = 1.0 / (2.0 * gamma + 1.0);
    return std::pow(v_alpha(alpha), -gamma * expo) *
           std::pow(gamma / ((1.0 + gamma) * std::fabs(b)), expo);
}

double mse_asymptotic(const AsymptoticContext& ctx, double k0, double k, double n,
                      bool log_correction) {
    check_context(ctx, "mse_asymptotic");
    if (!(0.0 < k0 && k0 < k && k < n)) {
        throw parameter_error("mse_asymptotic requires 0 < k0 < k < n");
    }
    const double b = b_alpha(ctx.alpha, ctx.gamma);
    const double variance = ctx.gamma * ctx.gamma * v_alpha(ctx.alpha) / k0;
    if (ctx.gamma <= -ctx.rho) {
        double bias = b * std::pow(k0 / k, ctx.gamma);
        if (log_correction && std::isfinite(ctx.rho) && ctx.gamma + ctx.rho == 0.0 &&
            ctx.c.has_value()) {
            const double a_nk = *ctx.c * std::pow(n / k, ctx.rho);
            bias += ctx.gamma * b * a_nk * std::pow(k0 / k, ctx.gamma) * std::log(k0 / k);
        }
        return variance + bias * bias;
    }
    const double c = require_c(ctx, "mse_asymptotic (gamma > -rho)");
    const double a_bias = c * ctx.gamma * b_alpha(ctx.alpha, -ctx.rho) / (ctx.gamma + ctx.rho) *
                          std::pow(k0 / n, -ctx.rho);
    const double bracket = b * std::pow(k0 / k, ctx.gamma) - a_bias;
    return variance + bracket * bracket;
}

double k0_opt1(const AsymptoticContext& ctx, double k) {
    check_context(ctx, "k0_opt1");
    const double b = b_alpha(ctx.alpha, ctx.gamma);
    if (std::fabs(b) <= kNullBiasTol) {
        throw null_bias_error(
            "k0_opt1 has no interior minimum at null bias; pick k0 by another rule");
    }
    const double expo = 1.0 / (2.0 * ctx.gamma + 1.0);
    return std::pow(ctx.gamma * v_alpha(ctx.alpha) / (2.0 * b * b), expo) *
           std::pow(k, 2.0 * ctx.gamma * expo);
}

double k0_opt2(const AsymptoticContext& ctx, double n) {
    check_context(ctx, "k0_opt2");
    const double c = require_c(ctx, "k0_opt2");
    if (ctx.gamma + ctx.rho == 0.0) {
        throw parameter_error("k0_opt2 requires gamma + rho != 0");
    }
    const double b_mr = b_alpha(ctx.alpha, -ctx.rho);
    if (std::fabs(b_mr) <= kNullBiasTol) {
        throw parameter_error("k0_opt2 requires b_alpha(-rho) != 0");
    }
    const double sum = ctx.gamma + ctx.rho;
    const double expo = 1.0 / (1.0 - 2.0 * ctx.rho);
    return std::pow(sum * sum * v_alpha(ctx.alpha) / (-2.0 * c * c * ctx.rho * b_mr * b_mr),
                    expo) *
           std::pow(n, -2.0 * ctx.rho * expo);
}

double k0_opt3(const AsymptoticContext& ctx, double k, double n) {
    check_context(ctx, "k0_opt3");
    const double c = require_c(ctx, "k0_opt3");
    if (!(ctx.gamma > -ctx.rho)) {
        throw parameter_error("k0_opt3 applies only for gamma > -rho");
    }
    const double b = b_alpha(ctx.alpha, ctx.gamma);
    const double b_mr = b_alpha(ctx.alpha, -ctx.rho);
    if (!(c * b_mr * b > 0.0)) {
        throw sign_error("k0_opt3 requires c * b_alpha(-rho) * b_alpha(gamma) > 0");
    }
    const double sum = ctx.gamma + ctx.rho;
    const double bracket = c * ctx.gamma * b_mr / (sum * b);
    return std::pow(bracket, 1.0 / sum) * std::pow(k, ctx.gamma / sum) *
           std::pow(n, ctx.rho / sum);
}

K0Selection k0_opt_select(const AsymptoticContext& ctx, double k, double n, double ratio_low,
                          double ratio_high) {
    check_context(ctx, "k0_opt_select");
    if (!(k > 1.0 && k < n)) throw parameter_error("k0_opt_select requires 1 < k < n");
    if (ctx.gamma <= -ctx.rho) {
        return {k0_opt1(ctx, k), K0Branch::Opt1};
    }
    const double expo =
        -ctx.rho * (2.0 * ctx.gamma + 1.0) / (ctx.gamma * (1.0 - 2.0 * ctx.rho));
    const double ratio = k / std::pow(n, expo);
    if (ratio < ratio_low) {
        return {k0_opt1(ctx, k), K0Branch::Opt1};
    }
    if (ratio > ratio_high) {
        const double c = require_c(ctx, "k0_opt_select");
        const double sign = c * b_alpha(ctx.alpha, -ctx.rho) * b_alpha(ctx.alpha, ctx.gamma);
        if (sign < 0.0) return {k0_opt2(ctx, n), K0Branch::Opt2};
        if (sign > 0.0) return {k0_opt3(ctx, k, n), K0Branch::Opt3};
        // Null dominant bias: only the A-term is left to balance.
        return {k0_opt2(ctx, n), K0Branch::Opt2};
    }
    const double d1 = solve_d1(ctx, ratio);
    return {d1 * std::pow(n, -2.0 * ctx.rho / (1.0 - 2.0 * ctx.rho)), K0Branch::D1};
}

double solve_d1(const AsymptoticContext& ctx, double big_d) {
    check_context(ctx, "solve_d1");
    if (!(big_d > 0.0)) throw parameter_error("solve_d1 requires D > 0");
    const double c = require_c(ctx, "solve_d1");
    if (!(ctx.gamma > -ctx.rho)) {
        throw parameter_error("solve_d1 applies only for gamma > -rho");
    }
    const double gamma = ctx.gamma, rho = ctx.rho;
    const double b = b_alpha(ctx.alpha, gamma);
    const double b_mr = b_alpha(ctx.alpha, -rho);
    const double a1 = 2.0 * gamma * b * b * std::pow(big_d, -2.0 * gamma);
    const double a2 = 2.0 * c * gamma * (rho - gamma) / (gamma + rho) * b * b_mr *
                      std::pow(big_d, -gamma);
    const double m = c * gamma * b_mr / (gamma + rho);
    const double a3 = -2.0 * rho * m * m;
    const double target = gamma * gamma * v_alpha(ctx.alpha);

    const auto lhs = [&](double x) {
        return a1 * std::pow(x, 2.0 * gamma + 1.0) + a2 * std::pow(x, gamma - rho + 1.0) +
               a3 * std::pow(x, 1.0 - 2.0 * rho);
    };

    // All exponents are positive, so lhs -> 0 at 0+ and the a1/a3 terms push
    // it above the target eventually.
    double hi = 1.0;
    int guard = 0;
    while (lhs(hi) <= target) {
        hi *= 2.0;
        if (++guard > 2000) throw no_root_error("solve_d1 found no upper bracket");
    }
    // The a2 < 0 shape can dip; walk a log grid for the first crossing.
    double lo = hi * 0x1.0p-60;
    double f_lo = lhs(lo) - target;
    if (f_lo > 0.0) throw no_root_error("solve_d1 has no sign change above zero");
    const int kGridSteps = 4096;
    const double factor = std::pow(hi / lo, 1.0 / kGridSteps);
    double bracket_lo = lo, bracket_hi = hi;
    for (double x = lo; x < hi; x *= factor) {
        const double next = std::min(x * factor, hi);
        if (lhs(next) - target >= 0.0) {
            bracket_lo = x;
            bracket_hi = next;
            break;
        }
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (bracket_lo + bracket_hi);
        if (mid == bracket_lo || mid == bracket_hi) break;
        if (lhs(mid) - target < 0.0) {
            bracket_lo = mid;
        } else {
            bracket_hi = mid;
        }
    }
    return 0.5 * (bracket_lo + bracket_hi);
}

int round_k0(double k0, int k) {
    if (k < 3) throw parameter_error("round_k0 needs k >= 3");
    const double rounded = std::floor(k0 + 0.5);
    const double clamped = std::min(std::max(rounded, 2.0), static_cast<double>(k - 1));
    return static_cast<int>(clamped);
}

}  // namespace tailfrac
