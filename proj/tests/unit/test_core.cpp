#include "maxlab/core.hpp"
#include "maxlab/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace maxlab;

TEST_CASE("isothermal pressure") {
    CHECK(eos_pressure(Eos{EosKind::isothermal, 1.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eos_pressure(Eos{EosKind::isothermal, 2.0}, 0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(eos_pressure(Eos{EosKind::isothermal, 1.0}, 0.0), DomainError);
    CHECK_THROWS_AS(eos_pressure(Eos{EosKind::isothermal, 1.0}, -1.0), DomainError);
}

TEST_CASE("isothermal energy derivatives match finite differences") {
    const Eos eos{EosKind::isothermal, 1.5};
    for (double nu : {0.3, 1.0, 2.7}) {
        const double h = 1e-5 * nu;
        const double d1 = (eos.e0(nu + h) - eos.e0(nu - h)) / (2 * h);
        const double d2 = (eos.de0(nu + h) - eos.de0(nu - h)) / (2 * h);
        CHECK(eos.de0(nu) == doctest::Approx(d1).epsilon(1e-8));
        CHECK(eos.d2e0(nu) == doctest::Approx(d2).epsilon(1e-8));
        // p(rho) = -e0'(1/rho)
        CHECK(eos.pressure(1.0 / nu) == doctest::Approx(-eos.de0(nu)).epsilon(1e-14));
    }
}

TEST_CASE("neo-Hookean stress examples") {
    const auto I2 = SquareMatrix::identity(2);
    CHECK(neo_hookean_stress(1.0, I2, I2, 1.0).max_abs() == 0.0);

    const auto tau = neo_hookean_stress(1.0, I2, 2.0 * I2, 1.0);
    CHECK(tau == I2);

    const auto tau2 = neo_hookean_stress(2.0, SquareMatrix::diagonal({2.0, 1.0}), I2, 1.0);
    CHECK(tau2 == SquareMatrix::diagonal({6.0, 0.0}));
}

TEST_CASE("stress is exactly symmetric for general F and SPD A") {
    const auto F = SquareMatrix::from_rows(3, {1.1, 0.3, -0.2, 0.05, 0.9, 0.4, 0.2, -0.1, 1.3});
    const auto A = SquareMatrix::from_rows(3, {2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.2});
    const auto tau = neo_hookean_stress(1.7, F, A, 0.8);
    CHECK(tau == tau.transpose());
}

TEST_CASE("square matrix algebra") {
    const auto M = SquareMatrix::from_rows(2, {2.0, 1.0, 1.0, 3.0});
    CHECK(M.determinant() == doctest::Approx(5.0));
    CHECK(M.trace() == doctest::Approx(5.0));
    const auto P = M * M.inverse();
    CHECK((P - SquareMatrix::identity(2)).max_abs() < 1e-15);
    const auto ev = M.symmetric_eigenvalues();
    CHECK(ev[0] == doctest::Approx((5.0 - std::sqrt(5.0)) / 2));
    CHECK(ev[1] == doctest::Approx((5.0 + std::sqrt(5.0)) / 2));
    CHECK_THROWS_AS(SquareMatrix::from_rows(2, {1.0, 2.0, 2.0, 4.0}).inverse(), DomainError);
    CHECK(frobenius(M, SquareMatrix::identity(2)) == doctest::Approx(5.0));

    const auto S = SquareMatrix::from_rows(3, {4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0});
    const auto e3 = S.symmetric_eigenvalues();
    CHECK(e3[0] + e3[1] + e3[2] == doctest::Approx(S.trace()).epsilon(1e-13));
    CHECK(e3[0] * e3[1] * e3[2] == doctest::Approx(S.determinant()).epsilon(1e-12));
}

TEST_CASE("material parameters") {
    const MaterialParams p{2.0, 0.5, 1.0};
    CHECK(p.lambda() == doctest::Approx(2.0));
    CHECK(p.mu_dot() == doctest::Approx(4.0));
    const MaterialParams solid{1.0, 0.0, 1.0};
    CHECK(std::isinf(solid.lambda()));
    CHECK(std::isinf(solid.mu_dot()));
    CHECK_THROWS_AS((MaterialParams{-1.0, 0.1, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((MaterialParams{1.0, -0.1, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((MaterialParams{1.0, 0.1, 0.0}.validate()), ConfigError);
    CHECK_THROWS_AS((MaterialParams{1.0, std::numeric_limits<double>::quiet_NaN(), 1.0}.validate()), ConfigError);
}
