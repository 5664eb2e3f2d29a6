#include <doctest.h>

#include <cmath>
#include <random>

#include "repct/errors.hpp"
#include "repct/experiments.hpp"
#include "repct/thresholds.hpp"

using namespace repct;

// Reference values computed at 50 digits by tests/oracles/closed_form_values.py.
TEST_SUITE("thresholds") {

TEST_CASE("closed forms match high-precision reference values") {
    CHECK(F(2.0, 1.0, 1.0) == doctest::Approx(0.61370563888010938).epsilon(1e-14));
    CHECK(g_zero_background(1.0, 4.0, 1.0) == doctest::Approx(0.78339366788359311).epsilon(1e-13));
    CHECK(g_zero_background(2.0, 1.0, 1.0) == doctest::Approx(-1.5953612269575698).epsilon(1e-13));
    CHECK(g_zero_background(1.0, 1.0, 1.0) == doctest::Approx(-0.62152583302698740).epsilon(1e-13));
    CHECK(g1_nonzero_background(4.0, 1.0, 1.0, 1.0) ==
          doctest::Approx(2.8088452440718866).epsilon(1e-13));
    CHECK(g1_nonzero_background(4.0, 4.0, 1.0, 1.0) ==
          doctest::Approx(0.78838171238568362).epsilon(1e-13));
    CHECK(g2_nonzero_background(3.0, 1.0, 1.0) == doctest::Approx(0.25924766411872202).epsilon(1e-12));
    const auto cp = critical_points(0.25, 1.0, 1.0);
    REQUIRE(cp.kind == critical_kind::two_points);
    CHECK(*cp.rho1_star == doctest::Approx(1.1715728752538099).epsilon(1e-15));
    CHECK(*cp.rho2_star == doctest::Approx(6.8284271247461901).epsilon(1e-15));
    CHECK(G(4.0, *cp.rho2_star, 0.25, 1.0, 1.0) == doctest::Approx(0.15538643110604569).epsilon(1e-13));
}

TEST_CASE("g vanishes exactly on Gamma = 2k rho") {
    for (int i = 0; i < 100; ++i) {
        const double rho = 0.01 + 0.37 * i;
        for (double k : {0.5, 1.0, 3.0}) CHECK(g_zero_background(rho, 2.0 * k * rho, k) == 0.0);
    }
}

TEST_CASE("g is continuous across the series switch") {
    const double rho = 1.5, k = 1.0;
    const double edge = 2.0 * k * rho * 1.05;
    const double lo = g_zero_background(rho, edge * (1 - 1e-12), k);
    const double hi = g_zero_background(rho, edge * (1 + 1e-12), k);
    CHECK(lo == doctest::Approx(hi).epsilon(1e-9));
}

TEST_CASE("g2 is g1 on the S3 surface and below 2c is a domain error") {
    for (double rho : {2.5, 3.0, 6.0}) {
        const double gamma = 0.5 * rho * rho;
        CHECK(g2_nonzero_background(rho, 1.0, 1.0) ==
              doctest::Approx(g1_nonzero_background(rho, gamma * (1 - 1e-13), 1.0, 1.0)).epsilon(1e-5));
    }
    CHECK(g2_nonzero_background(2.0, 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(g2_nonzero_background(1.0, 1.0, 1.0), repct::domain_error);
}

TEST_CASE("critical points by regime") {
    CHECK(critical_points(0.5, 1.0, 1.0).kind == critical_kind::degenerate);
    CHECK(*critical_points(0.5, 1.0, 1.0).rho1_star == 2.0);
    CHECK(critical_points(0.6, 1.0, 1.0).kind == critical_kind::none);
    const auto neg = critical_points(-1.0, 1.0, 1.0);
    CHECK(!neg.rho1_star);
    CHECK(*neg.rho2_star == doctest::Approx(0.73205080756887729).epsilon(1e-15));
    const auto zb = critical_points(1.0, 1.0, 0.0);
    CHECK(zb.kind == critical_kind::single_zero_background);
    CHECK(*zb.rho2_star == 2.0);
}

TEST_CASE("rest points satisfy the nullcline equation across beta") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> frac(1e-6, 1.0 - 1e-6), kc(0.2, 5.0);
    for (int i = 0; i < 500; ++i) {
        const double k = kc(rng), c = kc(rng);
        const double beta = frac(rng) * k / (2.0 * c);
        const auto cp = critical_points(beta, k, c);
        for (double r : {*cp.rho1_star, *cp.rho2_star}) {
            const double scale = 2.0 * k * r + beta * r * r + 2.0 * c * k;
            CHECK(std::abs(2.0 * k * (r - c) - beta * r * r) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("g1 squared equals rho G on the interval branch") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (int i = 0; i < 200; ++i) {
        const double beta = 0.5 * u(rng);
        const auto cp = critical_points(beta, 1.0, 1.0);
        const double rho = *cp.rho1_star + u(rng) * (*cp.rho2_star - *cp.rho1_star);
        const double g1 = g1_nonzero_background(rho, beta * rho * rho, 1.0, 1.0);
        CHECK(g1 * g1 == doctest::Approx(rho * G(rho, *cp.rho2_star, beta, 1.0, 1.0)).epsilon(1e-9));
    }
}

TEST_CASE("zero-background classification") {
    auto c0 = [](double rho, double d, double gamma) { return classify({rho, d, gamma, 1.0, 0.0}); };
    CHECK(c0(1.0, -5.0, -4.0).where == region::s1);
    CHECK(c0(1.0, 0.5, 4.0).where == region::supercritical);
    CHECK(*c0(1.0, 0.5, 4.0).surface_value == doctest::Approx(0.78339366788359311));
    CHECK(c0(1.0, 1.0, 4.0).where == region::s2);
    CHECK(c0(1.0, 1.0, 4.0).margin == doctest::Approx(1.0 - 0.78339366788359311));
    CHECK(c0(0.0, 0.0, 0.0).where == region::s1);
    CHECK(c0(0.0, -0.1, 0.0).where == region::supercritical);
    CHECK(c0(0.0, 1.0, 1.0).where == region::supercritical);
}

TEST_CASE("nonzero-background classification under both rules") {
    const initial_config inside{4.0, 0.0, 1.0, 1.0, 1.0};
    CHECK(classify(inside).where == region::s2);
    CHECK(classify(inside).shape == surface_shape::interval);
    CHECK(classify({4.0, 3.0, 1.0, 1.0, 1.0}).where == region::supercritical);
    CHECK(classify({1.0, -1.0, -1.0, 1.0, 1.0}).where == region::s1);
    CHECK(classify({1.0, 0.0, 1.0, 1.0, 1.0}).where == region::supercritical);  // above k rho^2/2c
    // S3: on the degenerate surface with d0 = g2.
    const double g2 = g2_nonzero_background(3.0, 1.0, 1.0);
    CHECK(classify({3.0, g2, 4.5, 1.0, 1.0}).where == region::s3);
    CHECK(classify({3.0, g2 + 0.01, 4.5, 1.0, 1.0}).where == region::supercritical);
    // Beyond rho2*: the rules disagree.
    const double rho = 8.0, gamma = 0.25 * rho * rho;
    const double g1 = g1_nonzero_background(rho, gamma, 1.0, 1.0);
    const initial_config above{rho, g1 + 1.0, gamma, 1.0, 1.0};
    CHECK(classify(above, threshold_rule::theorem).where == region::s2);
    CHECK(classify(above, threshold_rule::lemma).where == region::supercritical);
    CHECK(classify({rho, g1, gamma, 1.0, 1.0}, threshold_rule::lemma).where == region::s2);
}

TEST_CASE("rule names round-trip") {
    CHECK(parse_threshold_rule("lemma") == threshold_rule::lemma);
    CHECK(parse_threshold_rule(to_string(threshold_rule::theorem)) == threshold_rule::theorem);
    CHECK(!parse_threshold_rule("other"));
}

TEST_CASE("separatrix follows g with the saddle sign change") {
    const double beta = 1.0, k = 1.0;
    std::vector<double> rhos;
    for (int i = 0; i < 100; ++i) {
        const double rho = 0.1 + 0.06 * i;
        if (std::abs(rho - 2.0) > 0.04) rhos.push_back(rho);
    }
    for (const auto& p : separatrix(beta, k, 0.0, rhos)) {
        CHECK(p.d == doctest::Approx(g_zero_background(p.rho, beta * p.rho * p.rho, k)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(separatrix(-1.0, 1.0, 0.0, rhos), repct::domain_error);
    CHECK_THROWS_AS(separatrix(0.6, 1.0, 1.0, rhos), repct::domain_error);
}

}
