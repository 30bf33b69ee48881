#include <doctest.h>

#include <cmath>
#include <limits>

#include <tailfrac/asymptotics.hpp>
#include <tailfrac/inference.hpp>

#include "oracles.hpp"

using namespace tailfrac;

TEST_CASE("baseline interval: frozen hand values") {
    // z = Phi^{-1}(0.975) = 1.9599639845...; bounds 1/(1 +- z/10),
    // precomputed with the erf-based oracle.
    const ConfidenceInterval ci = ci_fraga_alves(1.0, 100, 0.95);
    CHECK(ci.lower == doctest::Approx(0.8361229192).epsilon(1e-5));
    CHECK(ci.upper == doctest::Approx(1.2437755230).epsilon(1e-5));
    CHECK_FALSE(ci.unbounded_above);
    CHECK(ci.kind == ConfidenceInterval::Kind::FragaAlves);
}

TEST_CASE("tuned-family interval: frozen hand values at alpha = 1") {
    // half width sqrt(1.25/100) z; bounds precomputed with the erf oracle.
    const ConfidenceInterval ci = ci_new(1.0, 100, 1.0, 0.95);
    CHECK(ci.lower == doctest::Approx(0.8202566412).epsilon(1e-5));
    CHECK(ci.upper == doctest::Approx(1.2806239366).epsilon(1e-5));
}

TEST_CASE("interval shrinks to the point estimate as k0 grows") {
    const ConfidenceInterval big = ci_fraga_alves(1.0, 100000000, 0.95);
    CHECK(big.lower == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(big.upper == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("k0 = 1 at level 0.95 is unbounded above") {
    const ConfidenceInterval ci = ci_fraga_alves(1.0, 1, 0.95);
    CHECK(ci.unbounded_above);
    CHECK(ci.upper == std::numeric_limits<double>::infinity());
    CHECK(ci.contains(5000.0));
    CHECK_FALSE(ci.contains(0.1));
}

TEST_CASE("unit variance factor reduces the scaled interval to the baseline") {
    const ConfidenceInterval a = ci_fraga_alves(1.7, 64, 0.9);
    const ConfidenceInterval b =
        ci_scaled(1.7, 64, 1.0, 0.9, ConfidenceInterval::Kind::FragaAlves);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.unbounded_above == b.unbounded_above);
}

TEST_CASE("tuned interval is at least as wide whenever V >= 1") {
    for (double alpha : {1.0, 1.5, 1.9, 2.37}) {
        REQUIRE(v_alpha(alpha) >= 1.0);
        const ConfidenceInterval base = ci_fraga_alves(1.0, 400, 0.95);
        const ConfidenceInterval tuned = ci_new(1.0, 400, alpha, 0.95);
        if (!tuned.unbounded_above) {
            REQUIRE(tuned.length() >= base.length());
        }
    }
}

TEST_CASE("bounded intervals contain the point estimate") {
    for (int k0 : {10, 50, 300}) {
        for (double level : {0.8, 0.95, 0.99}) {
            const ConfidenceInterval ci = ci_fraga_alves(2.5, k0, level);
            if (!ci.unbounded_above) {
                REQUIRE(ci.lower < 2.5);
                REQUIRE(ci.upper > 2.5);
            } else {
                REQUIRE(ci.lower < 2.5);
            }
        }
    }
}

TEST_CASE("interval length is decreasing in k0 and increasing in level") {
    double prev = ci_fraga_alves(1.0, 10, 0.95).length();
    for (int k0 : {20, 40, 80, 160}) {
        const double len = ci_fraga_alves(1.0, k0, 0.95).length();
        REQUIRE(len < prev);
        prev = len;
    }
    prev = ci_fraga_alves(1.0, 100, 0.5).length();
    for (double level : {0.8, 0.9, 0.95, 0.99}) {
        const double len = ci_fraga_alves(1.0, 100, level).length();
        REQUIRE(len > prev);
        prev = len;
    }
}

TEST_CASE("interval construction rejects bad inputs") {
    CHECK_THROWS_AS(ci_fraga_alves(-1.0, 100, 0.95), std::domain_error);
    CHECK_THROWS_AS(ci_fraga_alves(1.0, 0, 0.95), std::domain_error);
    CHECK_THROWS_AS(ci_fraga_alves(1.0, 100, 1.0), std::domain_error);
    CHECK_THROWS_AS(ci_new(1.0, 100, 0.5, 0.95), std::domain_error);
}
