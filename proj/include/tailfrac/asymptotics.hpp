#pragma once

#include <optional>

#include <tailfrac/second_order.hpp>

namespace tailfrac {

// Euler gamma function (Lanczos approximation, g = 7, 9 coefficients).
// Relative error <= 1e-13 on [0.5, 50].
double gamma_fn(double x);

// sqrt(Gamma(2 alpha + 1) - Gamma(alpha + 1)^2): the standard deviation of
// (ln Y)^alpha for standard Pareto Y.
double sigma_alpha(double alpha);

// (Gamma(alpha)/rho) (1 - (1-rho)^alpha) / (1-rho)^alpha for rho < 1,
// rho != 0.
double mu_alpha(double alpha, double rho);

// mu_alpha(rho)/Gamma(alpha) = ((1-rho)^{-alpha} - 1)/rho, continuous in
// alpha; at alpha = 0 it gives the limit of mu_{a}(rho)/Gamma(a) as a -> 0.
double mu_gamma_ratio(double alpha, double rho);

// Variance constant of the tuned estimator family, alpha >= 1.
double v_alpha(double alpha);

// Dominant bias coefficient (1+gamma)^{1-alpha} - (1+gamma)^{-2 alpha}/2 - 1/2.
double b_alpha(double alpha, double gamma);

// Closed-form root of alpha -> b_alpha(alpha, gamma) for gamma > 0.
double alpha0(double gamma);

// Independent cross-check: bisection root of b_alpha on [1, 64].
double alpha0_bisect(double gamma);

// Asymptotic relative efficiency of the tuned estimator at its optimal
// fraction versus the alpha = 1 baseline at its own; requires
// b_alpha(gamma) != 0.
double areff(double alpha, double gamma);

struct AsymptoticContext {
    double gamma = 1.0;
    double rho = kRhoExactTail;
    std::optional<double> c;
    double alpha = 1.0;
};

// Dominant-term asymptotic mean squared error at (k0, k, n).
// gamma <= -rho (or exact first order):
//     gamma^2 V_alpha / k0 + b_alpha(gamma)^2 (k0/k)^{2 gamma};
// gamma > -rho:
//     gamma^2 V_alpha / k0
//     + [b_alpha(gamma)(k0/k)^gamma
//        - c gamma b_alpha(-rho)/(gamma+rho) (k0/n)^{-rho}]^2.
// With log_correction, the gamma + rho = 0 boundary adds the diagnostic term
// gamma b_alpha(gamma) A(n/k) (k0/k)^gamma ln(k0/k) to the bias; fraction
// selection never uses it.
double mse_asymptotic(const AsymptoticContext& ctx, double k0, double k, double n,
                      bool log_correction = false);

// [gamma V_alpha / (2 b_alpha^2(gamma))]^{1/(2 gamma + 1)} k^{2 gamma/(2 gamma+1)}.
double k0_opt1(const AsymptoticContext& ctx, double k);

// [(gamma+rho)^2 V_alpha / (-2 c^2 rho b_alpha^2(-rho))]^{1/(-2 rho + 1)}
//     * n^{-2 rho/(-2 rho + 1)}.
double k0_opt2(const AsymptoticContext& ctx, double n);

// Bias-cancellation fraction for gamma > -rho with
// c b_alpha(-rho) b_alpha(gamma) > 0.
double k0_opt3(const AsymptoticContext& ctx, double k, double n);

enum class K0Branch { Opt1, Opt2, Opt3, D1 };

struct K0Selection {
    double value = 0.0;
    K0Branch branch = K0Branch::Opt1;
};

// Full case logic of the optimal-fraction theorem. The asymptotic
// comparisons k << / >> / ~ n^{-rho(2 gamma+1)/(gamma(-2 rho+1))} are
// resolved by the ratio r = k / n^expo: r < ratio_low picks the first
// branch, r > ratio_high the second or third by the sign of
// c b_alpha(-rho) b_alpha(gamma), and anything between solves for D1 with
// D = r.
K0Selection k0_opt_select(const AsymptoticContext& ctx, double k, double n,
                          double ratio_low = 0.1, double ratio_high = 10.0);

// Smallest positive root of
//   a1 D1^{2 gamma+1} + a2 D1^{gamma-rho+1} + a3 D1^{-2 rho+1} = gamma^2 V_alpha
// by bracketed bisection; residual <= 1e-10 relative to the right side.
double solve_d1(const AsymptoticContext& ctx, double big_d);

// Round half up and clamp to [2, k-1].
int round_k0(double k0, int k);

}  // namespace tailfrac
