#include <doctest.h>

#include <cmath>

#include <tailfrac/asymptotics.hpp>
#include <tailfrac/errors.hpp>
#include <tailfrac/rng.hpp>

#include "oracles.hpp"

using namespace tailfrac;

TEST_CASE("sigma_alpha: hand values and quadrature oracle") {
    CHECK(sigma_alpha(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(sigma_alpha(2.0) == doctest::Approx(std::sqrt(20.0)).epsilon(1e-13));
    for (double alpha : {0.9, 1.5, 2.37}) {
        const double m1 = oracles::pareto_log_moment(alpha);
        const double m2 = oracles::pareto_log_moment(2.0 * alpha);
        CHECK(sigma_alpha(alpha) == doctest::Approx(std::sqrt(m2 - m1 * m1)).epsilon(1e-8));
    }
}

TEST_CASE("mu_alpha: hand values") {
    CHECK(mu_alpha(1.0, -1.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(mu_alpha(2.0, -1.0) == doctest::Approx(0.75).epsilon(1e-13));
    CHECK_THROWS_AS(mu_alpha(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(mu_alpha(1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(mu_alpha(0.0, -1.0), std::domain_error);
}

TEST_CASE("mu_alpha equals its quadrature oracle") {
    CHECK(mu_alpha(1.9, -0.5) ==
          doctest::Approx(oracles::mu_quadrature(1.9, -0.5)).epsilon(1e-8));
    RandomStream stream(314);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = 0.6 + 3.0 * stream.uniform();
        const double rho = -(0.1 + 2.5 * stream.uniform());
        REQUIRE(mu_alpha(alpha, rho) ==
                doctest::Approx(oracles::mu_quadrature(alpha, rho)).epsilon(1e-8));
    }
}

TEST_CASE("v_alpha: hand values and positivity") {
    CHECK(v_alpha(1.0) == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(v_alpha(2.0) == doctest::Approx(14.25).epsilon(1e-13));
    for (double alpha = 1.0; alpha <= 5.0; alpha += 0.125) {
        REQUIRE(v_alpha(alpha) > 0.0);
    }
    CHECK_THROWS_AS(v_alpha(0.9), std::domain_error);
}

TEST_CASE("v_alpha matches the simulated variance of the limiting combination" *
          doctest::test_suite("slow")) {
    // Q^(alpha) = sqrt(k0) [ (Mbar_{2a} - G(2a+1))/(2 G(2a+1))
    //                        - (Mbar_{a-1} - G(a))/G(a) ]
    // over standard Pareto logs has variance V_alpha in the limit.
    const double alpha = 1.90;
    const int k0 = 10000;
    const int reps = 2000;
    const double g_high = gamma_fn(2.0 * alpha + 1.0);
    const double g_low = gamma_fn(alpha);
    double sum = 0.0, sum_sq = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        RandomStream stream = RandomStream::for_replication(271828, rep, 1);
        double acc_high = 0.0, acc_low = 0.0;
        for (int i = 0; i < k0; ++i) {
            const double log_y = -std::log(stream.uniform());  // ln of standard Pareto
            acc_high += std::pow(log_y, 2.0 * alpha);
            acc_low += std::pow(log_y, alpha - 1.0);
        }
        const double q = std::sqrt(static_cast<double>(k0)) *
                         ((acc_high / k0 - g_high) / (2.0 * g_high) -
                          (acc_low / k0 - g_low) / g_low);
        sum += q;
        sum_sq += q * q;
    }
    const double mean = sum / reps;
    const double variance = sum_sq / reps - mean * mean;
    // sampling error of a variance estimate: se ~ V sqrt(2/reps)
    const double se = v_alpha(alpha) * std::sqrt(2.0 / reps);
    CHECK(std::fabs(variance - v_alpha(alpha)) <= 3.0 * se);
}

TEST_CASE("b_alpha: hand values") {
    CHECK(b_alpha(1.0, 1.0) == doctest::Approx(0.375).epsilon(1e-13));
    for (double alpha : {1.0, 1.9, 3.5}) {
        CHECK(b_alpha(alpha, 0.0) == doctest::Approx(0.0).epsilon(1e-15));
    }
    CHECK(std::fabs(b_alpha(1.90, 1.0)) < 2e-3);  // two-decimal tuning parameter
}

TEST_CASE("alpha0: closed form reproduces the published table to 0.01") {
    const double gammas[] = {0.1, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0};
    const double expected[] = {4.65, 2.37, 2.07, 1.9, 1.71, 1.60, 1.54, 1.49, 1.42};
    for (int i = 0; i < 9; ++i) {
        CHECK(std::fabs(alpha0(gammas[i]) - expected[i]) <= 0.01);
    }
}

TEST_CASE("alpha0: null-bias root identity on a 50-point grid") {
    for (int i = 1; i <= 50; ++i) {
        const double gamma = 4.0 * i / 50.0;
        const double a0 = alpha0(gamma);
        REQUIRE(std::fabs(b_alpha(a0, gamma)) <= 1e-12);
        REQUIRE(std::fabs(alpha0_bisect(gamma) - a0) <= 1e-10);
    }
}

TEST_CASE("alpha0 is strictly decreasing in gamma") {
    double prev = alpha0(0.05);
    for (int i = 1; i <= 80; ++i) {
        const double gamma = 0.05 + i * 0.05;
        const double a0 = alpha0(gamma);
        REQUIRE(a0 < prev);
        prev = a0;
    }
}

TEST_CASE("proof identity: b_alpha from the mu ratios") {
    // gamma [ mu_{2a}(-g)/(2 Gamma(2a)) - mu_{a-1}(-g)/Gamma(a-1) ] = b_alpha(g)
    for (double alpha : {1.0, 1.5, 1.9, 2.37, 3.0}) {
        for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
            const double lhs = gamma * (mu_gamma_ratio(2.0 * alpha, -gamma) / 2.0 -
                                        mu_gamma_ratio(alpha - 1.0, -gamma));
            REQUIRE(lhs == doctest::Approx(b_alpha(alpha, gamma)).epsilon(1e-10));
        }
    }
}

TEST_CASE("proof identity: companion relation for the A-term coefficient") {
    // {g r/(g+r)} [ mu_{2a}(r)/(2 Gamma(2a)) - mu_{a-1}(r)/Gamma(a-1) ]
    //   = -{g/(g+r)} b_alpha(-r)
    for (double alpha : {1.0, 1.5, 1.9, 2.37, 3.0}) {
        for (double gamma : {0.25, 0.5, 1.0, 2.0}) {
            for (double rho : {-0.5, -1.0, -2.0}) {
                if (gamma + rho == 0.0) continue;
                const double ratio_term = mu_gamma_ratio(2.0 * alpha, rho) / 2.0 -
                                          mu_gamma_ratio(alpha - 1.0, rho);
                const double lhs = gamma * rho / (gamma + rho) * ratio_term;
                const double rhs = -gamma / (gamma + rho) * b_alpha(alpha, -rho);
                REQUIRE(lhs == doctest::Approx(rhs).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("mu_gamma_ratio is the continuous extension used at alpha = 1") {
    // mu_{a-1}(rho)/Gamma(a-1) at a = 1 collapses to zero; nearby alphas agree.
    CHECK(mu_gamma_ratio(0.0, -1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(mu_gamma_ratio(1e-9, -1.0) == doctest::Approx(0.0).epsilon(1e-8));
    // consistency with mu_alpha where both are defined
    for (double alpha : {0.5, 1.0, 2.2}) {
        for (double rho : {-0.4, -1.0, -3.0}) {
            CHECK(mu_alpha(alpha, rho) / gamma_fn(alpha) ==
                  doctest::Approx(mu_gamma_ratio(alpha, rho)).epsilon(1e-12));
        }
    }
}

TEST_CASE("areff: hand value and behaviour near the null-bias root") {
    CHECK(areff(1.0, 1.0) == doctest::Approx(1.0217459).epsilon(1e-6));
    const double a0 = alpha0(1.0);
    CHECK(areff(a0 - 1e-3, 1.0) > areff(a0 - 1e-2, 1.0));
    CHECK(areff(a0 - 1e-6, 1.0) > areff(a0 - 1e-3, 1.0));
    CHECK(areff(a0 - 1e-9, 1.0) > 100.0);
    CHECK_THROWS_AS(areff(a0, 1.0), null_bias_error);
    // for each table gamma there is an alpha below alpha0 with areff > 1
    for (double gamma : {0.5, 1.0, 2.0}) {
        bool found = false;
        for (double alpha = 1.0; alpha < alpha0(gamma); alpha += 0.01) {
            if (areff(alpha, gamma) > 1.0) {
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("mse_asymptotic: hand value and limits") {
    AsymptoticContext ctx{1.0, -2.0, 1.0, 1.0};
    CHECK(mse_asymptotic(ctx, 100, 1000, 1e6) ==
          doctest::Approx(0.01390625).epsilon(1e-12));
    // bias term dominates as k0 -> k
    const double b = b_alpha(1.0, 1.0);
    const double near = mse_asymptotic(ctx, 999.0, 1000, 1e6);
    CHECK(near - 1.25 / 999.0 == doctest::Approx(b * b).epsilon(1e-2));
    CHECK_THROWS_AS(mse_asymptotic(ctx, 0.0, 1000, 1e6), parameter_error);
}

TEST_CASE("k0_opt1: derived value, scaling law and grid oracle") {
    AsymptoticContext ctx{1.0, -2.0, 1.0, 1.0};
    CHECK(k0_opt1(ctx, 1000) == doctest::Approx(164.4141).epsilon(1e-4));
    CHECK(k0_opt1(ctx, 8000) == doctest::Approx(4.0 * k0_opt1(ctx, 1000)).epsilon(1e-12));

    RandomStream stream(4242);
    for (int trial = 0; trial < 20; ++trial) {
        AsymptoticContext random_ctx;
        random_ctx.gamma = 0.5 + 1.5 * stream.uniform();
        random_ctx.rho = -(random_ctx.gamma + 0.3 + stream.uniform());  // gamma <= -rho
        random_ctx.c = 1.0;
        random_ctx.alpha = 1.0 + 0.5 * stream.uniform();
        const double k = 900.0 + 2000.0 * stream.uniform();
        const int argmin = oracles::grid_argmin(
            [&](int k0) { return mse_asymptotic(random_ctx, k0, k, 1e9); }, 2,
            static_cast<int>(k) - 1);
        const int closed_form = static_cast<int>(std::floor(k0_opt1(random_ctx, k) + 0.5));
        REQUIRE(std::abs(argmin - closed_form) <= 1);
    }
}

TEST_CASE("k0_opt1 refuses the null-bias singularity") {
    AsymptoticContext ctx{1.0, -2.0, 1.0, alpha0(1.0)};
    CHECK_THROWS_AS(k0_opt1(ctx, 1000), null_bias_error);
}

TEST_CASE("k0_opt2: derived value, scaling law and grid oracle") {
    AsymptoticContext ctx{2.0, -1.0, 1.0, 1.0};
    CHECK(k0_opt2(ctx, 1e6) == doctest::Approx(16441.41).epsilon(1e-4));
    CHECK(k0_opt2(ctx, 8e6) == doctest::Approx(4.0 * k0_opt2(ctx, 1e6)).epsilon(1e-12));

    RandomStream stream(777);
    for (int trial = 0; trial < 20; ++trial) {
        AsymptoticContext rc;
        rc.gamma = 1.5 + 1.5 * stream.uniform();
        rc.rho = -(0.3 + 0.6 * stream.uniform());  // gamma > -rho
        rc.c = 0.5 + 1.5 * stream.uniform();
        rc.alpha = 1.0 + 0.3 * stream.uniform();
        const double n = 1e6;
        // variance-plus-A-bias objective of the regime k >> threshold
        const auto objective = [&](int k0) {
            const double m = *rc.c * rc.gamma * b_alpha(rc.alpha, -rc.rho) /
                             (rc.gamma + rc.rho) * std::pow(k0 / n, -rc.rho);
            return rc.gamma * rc.gamma * v_alpha(rc.alpha) / k0 + m * m;
        };
        const double closed = k0_opt2(rc, n);
        const int lo = std::max(2, static_cast<int>(closed / 4));
        const int hi = static_cast<int>(closed * 4);
        const int argmin = oracles::grid_argmin(objective, lo, hi);
        REQUIRE(std::abs(argmin - static_cast<int>(std::floor(closed + 0.5))) <= 1);
    }
}

TEST_CASE("k0_opt3: bias bracket cancels exactly") {
    AsymptoticContext ctx{2.0, -1.0, 1.0, 1.0};
    CHECK(k0_opt3(ctx, 1e5, 1e6) == doctest::Approx(16875.0).epsilon(1e-10));
    // k multiplied by m scales the output by m^{gamma/(gamma+rho)}
    CHECK(k0_opt3(ctx, 2e5, 1e6) ==
          doctest::Approx(4.0 * k0_opt3(ctx, 1e5, 1e6)).epsilon(1e-12));

    RandomStream stream(888);
    for (int trial = 0; trial < 20; ++trial) {
        AsymptoticContext rc;
        rc.gamma = 1.5 + 1.0 * stream.uniform();
        rc.rho = -(0.3 + 0.5 * stream.uniform());
        rc.c = 0.5 + stream.uniform();
        rc.alpha = 1.0 + 0.2 * stream.uniform();
        const double k = 1e5, n = 1e6;
        const double k0 = k0_opt3(rc, k, n);
        const double term1 = b_alpha(rc.alpha, rc.gamma) * std::pow(k0 / k, rc.gamma);
        const double term2 = *rc.c * rc.gamma * b_alpha(rc.alpha, -rc.rho) /
                             (rc.gamma + rc.rho) * std::pow(k0 / n, -rc.rho);
        REQUIRE(std::fabs(term1 - term2) <=
                1e-12 * (std::fabs(term1) + std::fabs(term2)));
    }
}

TEST_CASE("k0_opt3 enforces the sign condition") {
    // c < 0 flips the product negative
    AsymptoticContext ctx{2.0, -1.0, -1.0, 1.0};
    CHECK_THROWS_AS(k0_opt3(ctx, 1e5, 1e6), sign_error);
}

TEST_CASE("k0_opt_select: branch logic") {
    // gamma <= -rho always picks the first branch
    AsymptoticContext burr_like{0.5, -1.0, 0.5, 1.0};
    CHECK(k0_opt_select(burr_like, 500, 1e6).branch == K0Branch::Opt1);

    AsymptoticContext pareto_like{2.0, kRhoExactTail, {}, 1.0};
    CHECK(k0_opt_select(pareto_like, 500, 1e6).branch == K0Branch::Opt1);

    // gamma = 2, rho = -1: the regime boundary sits at n^{5/6}
    AsymptoticContext heavy{2.0, -1.0, 1.0, 1.0};
    const double n = 1e12;
    const double threshold = std::pow(n, 5.0 / 6.0);
    const auto sel = k0_opt_select(heavy, 50.0 * threshold, n);
    CHECK(sel.branch == K0Branch::Opt3);  // c b(-rho) b(gamma) > 0 here
    AsymptoticContext heavy_neg{2.0, -1.0, -1.0, 1.0};
    CHECK(k0_opt_select(heavy_neg, 50.0 * threshold, n).branch == K0Branch::Opt2);

    // k far below the threshold: first branch again
    CHECK(k0_opt_select(heavy, threshold / 50.0, n).branch == K0Branch::Opt1);

    // comparable magnitudes: D1 branch
    const auto mid = k0_opt_select(heavy, 2.0 * threshold, n);
    CHECK(mid.branch == K0Branch::D1);
    CHECK(mid.value > 0.0);
}

TEST_CASE("solve_d1: residual, reduced closed form, and stationarity") {
    AsymptoticContext ctx{2.0, -1.0, 1.0, 1.3};
    const double gamma = ctx.gamma, rho = ctx.rho, c = *ctx.c;
    const double b = b_alpha(ctx.alpha, gamma);
    const double b_mr = b_alpha(ctx.alpha, -rho);
    const double big_d = 2.0;
    const double d1 = solve_d1(ctx, big_d);

    const double a1 = 2.0 * gamma * b * b * std::pow(big_d, -2.0 * gamma);
    const double a2 = 2.0 * c * gamma * (rho - gamma) / (gamma + rho) * b * b_mr *
                      std::pow(big_d, -gamma);
    const double m = c * gamma * b_mr / (gamma + rho);
    const double a3 = -2.0 * rho * m * m;
    const double target = gamma * gamma * v_alpha(ctx.alpha);
    const double residual = a1 * std::pow(d1, 2.0 * gamma + 1.0) +
                            a2 * std::pow(d1, gamma - rho + 1.0) +
                            a3 * std::pow(d1, 1.0 - 2.0 * rho) - target;
    CHECK(std::fabs(residual) <= 1e-10 * target);

    // null dominant bias: a1 = a2 = 0 and the equation has a closed form
    AsymptoticContext tuned{2.0, -1.0, 1.0, alpha0(2.0)};
    const double m_t = *tuned.c * tuned.gamma * b_alpha(tuned.alpha, -tuned.rho) /
                       (tuned.gamma + tuned.rho);
    const double a3_t = -2.0 * tuned.rho * m_t * m_t;
    const double target_t = tuned.gamma * tuned.gamma * v_alpha(tuned.alpha);
    const double closed = std::pow(target_t / a3_t, 1.0 / (1.0 - 2.0 * tuned.rho));
    CHECK(solve_d1(tuned, big_d) == doctest::Approx(closed).epsilon(1e-10));

    // first-order stationarity of the case (ii) objective at the scaled
    // root: a symmetric step moves the objective by a negligible relative
    // amount
    const double n = 1e9;
    const double expo = -rho * (2.0 * gamma + 1.0) / (gamma * (1.0 - 2.0 * rho));
    const double k = big_d * std::pow(n, expo);
    const double k0_star = d1 * std::pow(n, -2.0 * rho / (1.0 - 2.0 * rho));
    const double h = 1e-3 * k0_star;
    const double swing = mse_asymptotic(ctx, k0_star + h, k, n) -
                         mse_asymptotic(ctx, k0_star - h, k, n);
    CHECK(std::fabs(swing) <= 1e-6 * mse_asymptotic(ctx, k0_star, k, n));
}

TEST_CASE("round_k0: half-up rounding with clamping") {
    CHECK(round_k0(10.4, 100) == 10);
    CHECK(round_k0(10.5, 100) == 11);
    CHECK(round_k0(0.3, 100) == 2);
    CHECK(round_k0(250.0, 100) == 99);
    CHECK_THROWS_AS(round_k0(5.0, 2), parameter_error);
}
