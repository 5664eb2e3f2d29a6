#include <doctest.h>

#include <cmath>
#include <random>

#include "repct/errors.hpp"
#include "repct/spectral.hpp"

using namespace repct;

TEST_SUITE("spectral") {

TEST_CASE("decomposition of a shear-rotation tensor") {
    const gradient_tensor m(3.0, 1.0, -2.0, 1.0);
    const auto s = decompose(m);
    CHECK(s.d == 4.0);
    CHECK(s.p == 2.0);
    CHECK(s.q == -1.0);
    CHECK(s.omega == 3.0);
    CHECK(spectral_gap(m) == doctest::Approx(4.0 + 1.0 - 9.0));
}

TEST_CASE("real eigenvalues are ordered and exact for diagonal tensors") {
    const auto ev = eigenvalues(gradient_tensor(2.0, 0.0, 0.0, -1.0));
    CHECK(ev.lambda1 == std::complex<double>(-1.0, 0.0));
    CHECK(ev.lambda2 == std::complex<double>(2.0, 0.0));
}

TEST_CASE("negative gap gives a conjugate pair") {
    const auto ev = eigenvalues(gradient_tensor(1.0, -2.0, 2.0, 1.0));
    CHECK(ev.lambda1.real() == doctest::Approx(1.0));
    CHECK(std::abs(ev.lambda1.imag()) == doctest::Approx(2.0));
    CHECK(ev.lambda1 == std::conj(ev.lambda2));
}

TEST_CASE("signed zero trace does not flip ordering") {
    const auto ev = eigenvalues(gradient_tensor(-0.0, 1.0, 1.0, 0.0));
    CHECK(ev.lambda1.real() == doctest::Approx(-1.0));
    CHECK(ev.lambda2.real() == doctest::Approx(1.0));
}

TEST_CASE("nearly cancelling eigenvalue keeps relative accuracy") {
    // lambda = 1e8 and 1e-8: the small one from det / big.
    const auto ev = eigenvalues(gradient_tensor(1e8, 0.0, 0.0, 1e-8));
    CHECK(ev.lambda1.real() == doctest::Approx(1e-8).epsilon(1e-12));
}

TEST_CASE("random tensors satisfy trace, determinant and gap identities") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const gradient_tensor m(u(rng), u(rng), u(rng), u(rng));
        const auto s = decompose(m);
        const auto ev = eigenvalues(m);
        const double scale = 1.0 + std::abs(m.trace()) + std::abs(m.determinant());
        CHECK(std::abs(ev.lambda1 + ev.lambda2 - m.trace()) < 1e-12 * scale);
        CHECK(std::abs(ev.lambda1 * ev.lambda2 - m.determinant()) < 1e-11 * scale);
        CHECK(spectral_gap(m) ==
              doctest::Approx(s.p * s.p + s.q * s.q - s.omega * s.omega).epsilon(1e-12).scale(scale));
        CHECK((ev.lambda1.imag() != 0.0) == (spectral_gap(m) < 0.0));
    }
}

TEST_CASE("non-finite entries are rejected") {
    CHECK_THROWS_AS(gradient_tensor(NAN, 0, 0, 0), repct::domain_error);
    CHECK_THROWS_AS(gradient_tensor(0, INFINITY, 0, 0), repct::domain_error);
}

TEST_CASE("beta_of and config validation") {
    CHECK(std::get<double>(beta_of({2.0, 0.0, 8.0, 1.0, 0.0})) == 2.0);
    CHECK(is_vacuum(beta_of({0.0, -1.0, 3.0, 1.0, 0.0})));
    CHECK_THROWS_AS(beta_of({1.0, 0.0, 0.0, -1.0, 0.0}), invalid_config);
    CHECK_THROWS_AS(beta_of({-1.0, 0.0, 0.0, 1.0, 0.0}), invalid_config);
    CHECK_THROWS_AS(beta_of({1.0, 0.0, 0.0, 1.0, -0.5}), invalid_config);
    CHECK_THROWS_AS(beta_of({1.0, NAN, 0.0, 1.0, 0.0}), invalid_config);
}

}
