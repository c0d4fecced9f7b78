#include <doctest.h>

#include <qseries/modular.hpp>
#include <qseries/schwarzian.hpp>

#include "oracles.hpp"

using namespace qseries;

TEST_CASE("Eisenstein series against divisor sums")
{
    const RSeries e2 = eisenstein(2, 5).series;
    const long e2_expected[] = {1, -24, -72, -96, -168};
    for (int k = 0; k < 5; ++k)
        CHECK(e2.coeff(k) == e2_expected[k]);
    const RSeries e4 = eisenstein(4, 4).series;
    const long e4_expected[] = {1, 240, 2160, 6720};
    for (int k = 0; k < 4; ++k)
        CHECK(e4.coeff(k) == e4_expected[k]);

    const auto big2 = oracle::eisenstein(2, 60);
    const auto big4 = oracle::eisenstein(4, 60);
    const RSeries e2b = eisenstein(2, 60).series;
    const RSeries e4b = eisenstein(4, 60).series;
    for (int k = 0; k < 60; ++k) {
        CHECK(e2b.coeff(k) == oracle::at(big2, k));
        CHECK(e4b.coeff(k) == oracle::at(big4, k));
    }
    CHECK(eisenstein(2, 1).series.coeff(0) == 1);
    CHECK(eisenstein(2, 1).kind == ModularKind::eisenstein_2);
    CHECK_THROWS_AS(eisenstein(6, 5), std::invalid_argument);
    CHECK_THROWS_AS(eisenstein(2, 0), std::invalid_argument);
}

TEST_CASE("Ramanujan identity")
{
    for (int n : {3, 10, 20, 40, 50}) {
        const RSeries r = verify_ramanujan(n);
        CHECK(r.order() == n);
        CHECK(r.is_zero());
    }
    // A rescaled E_2 breaks the identity.
    const RSeries e2 = scale_rational(eisenstein(2, 10).series, Rational(2));
    const RSeries e4 = eisenstein(4, 10).series;
    const RSeries bad = scale_rational(RSeries::gen("q", 10) * derivative(e2), Rational(12)) - e2 * e2 + e4;
    CHECK_FALSE(bad.is_zero());
}

TEST_CASE("Euler product against schoolbook expansion")
{
    const auto p = oracle::euler_product(40);
    const RSeries s = euler_product(40);
    for (int k = 0; k < 40; ++k)
        CHECK(s.coeff(k) == oracle::at(p, k));
}

TEST_CASE("eta quotient hauptmodul")
{
    const RSeries f = eta_quotient_hauptmodul(14).series;
    CHECK(f.order() == 14);
    const std::map<int, long> expected{{1, 1}, {4, -5}, {7, 32}, {10, -198}, {13, 1214}};
    for (int k = 0; k < 14; ++k)
        CHECK(f.coeff(k) == (expected.count(k) ? expected.at(k) : 0));

    const RSeries u = eta_quotient_u(14).series;
    CHECK(u.min_exp() == -1);
    CHECK(u.coeff(-1) == 1);
    CHECK(u.coeff(0) == -3);
    CHECK(equal_up_to_shared_order(f * add_constant(u, Rational(3)), RSeries::one("q", 40)));

    // u from the naive product: P(q)^3 / P(q^9)^3, shifted.
    const auto p = oracle::euler_product(12);
    const auto p9 = oracle::substitute_power(p, 9, 12);
    auto cube = oracle::mul(oracle::mul(p, p, 12), p, 12);
    auto cube9 = oracle::mul(oracle::mul(p9, p9, 12), p9, 12);
    const auto ratio = oracle::mul(cube, oracle::inverse(cube9, 12), 12);
    for (int k = -1; k < 10; ++k)
        CHECK(u.coeff(k) == oracle::at(ratio, k + 1));

    const RSeries f40 = eta_quotient_hauptmodul(40).series;
    for (const auto &[e, c] : f40.terms())
        CHECK(e % 3 == 1);
}

TEST_CASE("cubic pencil data")
{
    const CubicPencilData d = cubic_pencil_data(12);
    CHECK(d.psi_ratio.valuation() == 2);
    CHECK(d.psi_ratio.coeff(2) == -12);
    CHECK(d.psi_ratio.coeff(5) == -36);
    CHECK(d.eta == -d.psi_ratio);
    CHECK(d.alpha.coeff(-1) == -1);
    CHECK(d.alpha.coeff(0) == 0);
    CHECK(d.alpha.coeff(2) == -3);
    // Both E_2(q^3) and E_2(q^9) contribute at q^9: (-96 + 216) / 8.
    CHECK(d.alpha.coeff(8) == 15);
    // alpha from the divisor-sum oracle: (E2(q^3) - 9 E2(q^9)) / (8q).
    const auto e2 = oracle::eisenstein(2, 6);
    const auto e23 = oracle::substitute_power(e2, 3, 14);
    const auto e29 = oracle::substitute_power(e2, 9, 14);
    for (int k = -1; k < 12; ++k)
        CHECK(d.alpha.coeff(k) == (oracle::at(e23, k + 1) - 9 * oracle::at(e29, k + 1)) / 8);
    CHECK(d.four_z2_psi2.valuation() >= 0);
    CHECK_THROWS_AS(cubic_pencil_data(3), std::invalid_argument);
}

TEST_CASE("E4 equation")
{
    for (int n : {10, 20, 40}) {
        const E4Residuals r = verify_e4_equation(n);
        CHECK(r.assembled.order() == n);
        CHECK(r.direct.order() == n);
        CHECK(r.assembled.is_zero());
        CHECK(r.direct.is_zero());
    }
    const RSeries f = eta_quotient_hauptmodul(30).series;
    CHECK(e4_residual_for(mobius(f, Rational(1), Rational(1)), 20).is_zero());
    CHECK_FALSE(e4_residual_for(RSeries::gen("q", 30), 20).is_zero());
}

TEST_CASE("Picard-Fuchs equation")
{
    for (int n : {10, 20, 40}) {
        const RSeries r = verify_picard_fuchs(n);
        CHECK(r.order() == n);
        CHECK(r.is_zero());
    }
    const RSeries t = RSeries::gen("q", 20);
    const RSeries bad = picard_fuchs_residual(t, 7);
    CHECK(bad.valuation() <= 6);
}
