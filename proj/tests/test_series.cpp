#include <doctest.h>

#include <qseries/schwarzian.hpp>
#include <qseries/series_json.hpp>

#include "oracles.hpp"

using namespace qseries;
using oracle::Poly;

namespace
{

RSeries poly(std::initializer_list<std::pair<const int, Rational>> t, int order)
{
    return RSeries::from_terms("q", order, std::map<int, Rational>(t));
}

RSeries q(int order)
{
    return RSeries::gen("q", order);
}

void check_terms(const RSeries &s, std::initializer_list<std::pair<const int, long>> expected, int upto)
{
    std::map<int, long> e(expected);
    REQUIRE(s.order() >= upto);
    for (int k = std::min(s.min_exp(), 0); k < upto; ++k) {
        const long want = e.count(k) ? e[k] : 0;
        CHECK_MESSAGE(s.coeff(k) == want, "exponent " << k);
    }
}

} // namespace

TEST_CASE("rational parsing round-trips canonical text")
{
    CHECK(parse_rational("6/4") == make_rational(3, 2));
    CHECK(to_string(parse_rational("-6/4")) == "-3/2");
    CHECK(to_string(parse_rational("+7")) == "7");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
    CHECK(make_rational(1, -2) == make_rational(-1, 2));
}

TEST_CASE("multiplication")
{
    CHECK(poly({{0, 1}, {1, 1}}, 10) * poly({{0, 1}, {1, -1}}, 10) == poly({{0, 1}, {2, -1}}, 10));

    std::map<int, Rational> geo;
    for (int e = 0; e < 12; ++e)
        geo[e] = 1;
    const RSeries prod = poly({{0, 1}, {1, -1}}, 12) * RSeries::from_terms("q", 12, geo);
    CHECK(prod == RSeries::one("q", 12));

    const Poly e2 = oracle::eisenstein(2, 4);
    const Poly sq = oracle::mul(e2, e2, 4);
    const RSeries e2s = oracle::to_series(e2, 4);
    const RSeries got = e2s * e2s;
    CHECK(got.order() == 4);
    for (int k = 0; k < 4; ++k)
        CHECK(got.coeff(k) == oracle::at(sq, k));
    check_terms(got, {{0, 1}, {1, -48}, {2, 432}, {3, 3264}}, 4);

    SUBCASE("truncation follows valuations")
    {
        const RSeries a = shift(q(5), 1); // q^2 + O(q^6)
        const RSeries b = RSeries::from_terms("q", 3, {{-1, Rational(1)}});
        CHECK((a * b).order() == std::min(6 - 1, 3 + 2));
    }
    CHECK_THROWS_AS(q(5) * RSeries::gen("y", 5), std::invalid_argument);
}

TEST_CASE("inversion")
{
    const RSeries inv = invert(poly({{0, 1}, {1, -1}}, 8));
    for (int k = 0; k < 8; ++k)
        CHECK(inv.coeff(k) == 1);
    CHECK_THROWS_AS(invert(RSeries::zero("y", 5)), std::domain_error);

    const RSeries a = RSeries::from_terms("y", 3, {{0, Rational(1)}, {1, Rational(120)}, {2, Rational(113400)}});
    const Poly oracle_inv = oracle::inverse({{0, 1}, {1, 120}, {2, 113400}}, 3);
    const RSeries b = invert(a);
    for (int k = 0; k < 3; ++k)
        CHECK(b.coeff(k) == oracle::at(oracle_inv, k));
    CHECK(b.coeff(2) == -99000);

    SUBCASE("Laurent")
    {
        const RSeries l = poly({{2, 2}, {3, 1}}, 8);
        const RSeries li = invert(l);
        CHECK(li.min_exp() == -2);
        CHECK(li.order() == 8 - 4);
        CHECK(li.coeff(-2) == make_rational(1, 2));
        CHECK(equal_up_to_shared_order(l * li, RSeries::one("q", 20)));
    }
}

TEST_CASE("composition")
{
    CHECK(equal_up_to_shared_order(compose(poly({{1, 1}, {2, 1}}, 10), poly({{2, 1}}, 10)),
                                   poly({{2, 1}, {4, 1}}, 30)));

    const RSeries l = log(add_constant(q(12), Rational(1)));
    const RSeries ex = add_constant(exp(q(12)), Rational(0));
    CHECK(equal_up_to_shared_order(compose(ex, l), poly({{0, 1}, {1, 1}}, 12)));

    const Poly e2 = oracle::eisenstein(2, 4);
    const RSeries got = compose(oracle::to_series(e2, 4), poly({{3, 1}}, 10));
    CHECK(got.order() >= 10);
    check_terms(got, {{0, 1}, {3, -24}, {6, -72}, {9, -96}}, 10);
    CHECK(got == substitute_power(oracle::to_series(e2, 4), 3).truncated(got.order()));

    CHECK_THROWS_AS(compose(q(5), add_constant(q(5), Rational(1))), std::domain_error);
}

TEST_CASE("reversion")
{
    CHECK(revert(q(10)) == q(10));
    const RSeries f = poly({{1, 1}, {2, 1}}, 6);
    const RSeries g = revert(f);
    check_terms(g, {{1, 1}, {2, -1}, {3, 2}, {4, -5}, {5, 14}}, 6);
    // f(g) by naive substitution.
    Poly gp = g.terms();
    Poly fg = oracle::mul(gp, gp, 6);
    for (const auto &[e, c] : gp)
        fg[e] += c;
    for (int k = 0; k < 6; ++k)
        CHECK(oracle::at(fg, k) == (k == 1 ? 1 : 0));
    CHECK_THROWS_AS(revert(add_constant(q(5), Rational(1))), std::domain_error);
    CHECK_THROWS_AS(revert(poly({{2, 1}}, 5)), std::domain_error);
}

TEST_CASE("derivative and antiderivative")
{
    CHECK(derivative(poly({{3, 1}}, 10)) == poly({{2, 3}}, 9));
    CHECK(antiderivative(poly({{0, 1}, {1, 2}}, 10)) == poly({{1, 1}, {2, 1}}, 11));
    CHECK_THROWS_AS(antiderivative(poly({{-1, 1}}, 10)), std::domain_error);
    CHECK(antiderivative(poly({{0, 1}}, 4), Rational(7)).coeff(0) == 7);
}

TEST_CASE("exp, log, roots")
{
    CHECK(exp(RSeries::zero("q", 8)) == RSeries::one("q", 8));
    const RSeries l = log(poly({{0, 1}, {1, 1}}, 8));
    for (int k = 1; k < 8; ++k)
        CHECK(l.coeff(k) == make_rational(k % 2 ? 1 : -1, k));
    CHECK_THROWS_AS(exp(RSeries::one("q", 5)), std::domain_error);
    CHECK_THROWS_AS(log(poly({{0, 2}}, 5)), std::domain_error);

    oracle::RandomRationals rnd(7);
    for (int i = 0; i < 20; ++i) {
        const RSeries a = rnd.series(1, 10);
        CHECK(log(exp(a)) == a);
    }

    const RSeries cube = pow(poly({{1, 1}, {2, 1}}, 10), 3);
    const RSeries root = nth_root(cube, 3);
    CHECK(equal_up_to_shared_order(root, poly({{1, 1}, {2, 1}}, 10)));
    CHECK_THROWS_AS(nth_root(poly({{1, 1}}, 5), 2), std::domain_error);
    CHECK_THROWS_AS(nth_root(poly({{0, 2}}, 5), 2), std::domain_error);
}

TEST_CASE("pow matches repeated multiplication")
{
    const RSeries a = poly({{0, 1}, {1, 2}, {3, -1}}, 9);
    CHECK(pow(a, 3) == a * a * a);
    CHECK(equal_up_to_shared_order(pow(a, -2) * a * a, RSeries::one("q", 9)));
    CHECK(pow(a, 0) == RSeries::one("q", 9));
}

TEST_CASE("Schwarzian basics")
{
    CHECK(schwarzian(q(10)).is_zero());
    CHECK(schwarzian(q(10)).order() == 7);
    CHECK_THROWS_AS(schwarzian(poly({{2, 1}}, 10)), std::domain_error);

    const RSeries f = poly({{1, 1}, {2, 3}, {3, -1}, {5, 2}}, 14);
    CHECK(equal_up_to_shared_order(schwarzian(mobius(f, Rational(2), Rational(3))), schwarzian(f)));

    CHECK(mobius(q(8), Rational(1), Rational(0)) == q(8));
    CHECK(mobius(q(8), Rational(2), Rational(0)) == scale(q(8), make_rational(1, 2)));
    const Poly denom = oracle::inverse({{0, 1}, {1, 1}, {2, 1}}, 8);
    const RSeries m = mobius(poly({{1, 1}, {2, 1}}, 8), Rational(1), Rational(1));
    const Poly expected = oracle::mul({{1, 1}, {2, 1}}, denom, 8);
    for (int k = 0; k < m.order(); ++k)
        CHECK(m.coeff(k) == oracle::at(expected, k));
    CHECK(m.coeff(3) == -1);
    CHECK_THROWS_AS(mobius(q(8), Rational(0), Rational(1)), std::invalid_argument);
}

TEST_CASE("Schwarzian solver")
{
    CHECK(solve_schwarzian(RSeries::zero("q", 10), Rational(1), Rational(0)) == q(13));
    CHECK_THROWS_AS(solve_schwarzian(RSeries::zero("q", 10), Rational(0), Rational(0)), std::invalid_argument);

    oracle::RandomRationals rnd(11);
    for (int i = 0; i < 10; ++i) {
        const RSeries g = rnd.series(0, 12);
        const Rational a1 = rnd.nonzero();
        const Rational a2 = rnd.next();
        const RSeries f = solve_schwarzian(g, a1, a2);
        CHECK(f.coeff(1) == a1);
        CHECK(f.coeff(2) == a2);
        CHECK((schwarzian(f) + g).is_zero());
        CHECK(solve_schwarzian(g, a1, a2) == f);
    }
}

TEST_CASE("second-order ODE")
{
    auto [s0, s1] = solve_ode2(RSeries::zero("q", 8), RSeries::zero("q", 8));
    CHECK(s0 == RSeries::one("q", 10));
    CHECK(s1 == q(10));

    auto [c0, c1] = solve_ode2(RSeries::zero("q", 8), RSeries::constant("q", Rational(2), 8));
    // c_{n+2} = c_n / ((n+1)(n+2)): cosh and sinh.
    Rational fact = 1;
    for (int n = 0; n < 10; ++n) {
        if (n > 0)
            fact *= n;
        CHECK(c0.coeff(n) == (n % 2 == 0 ? 1 / fact : Rational(0)));
        CHECK(c1.coeff(n) == (n % 2 == 1 ? 1 / fact : Rational(0)));
    }

    CHECK(ode_reduce(RSeries::zero("q", 8), poly({{0, 3}, {2, 1}}, 8)) == poly({{0, 3}, {2, 1}}, 7));
    CHECK(equal_up_to_shared_order(ode_reduce(poly({{1, 2}}, 8), RSeries::zero("q", 8)), poly({{0, 2}, {2, 2}}, 7)));
}

TEST_CASE("weighted Schwarzian")
{
    const RSeries f = poly({{1, 1}, {3, 2}, {4, -1}}, 12);
    const auto w = weighted_schwarzian(f, RSeries::one("q", 12), RSeries::zero("q", 12), 0);
    CHECK(w.t_power == 2);
    CHECK(equal_up_to_shared_order(w.series, schwarzian(f)));
    CHECK_THROWS_AS(weighted_schwarzian(f, poly({{0, 2}}, 12), RSeries::zero("q", 12), 0), std::domain_error);
}

TEST_CASE("weighted Schwarzian comparison identity")
{
    oracle::RandomRationals rnd(23);
    for (int i = 0; i < 10; ++i) {
        const int n = 24;
        RSeries psi = add_constant(rnd.series(1, n), Rational(1));
        const RSeries eta = rnd.series(0, n);
        RSeries f = rnd.series(2, n);
        f.set_coeff(1, rnd.nonzero());
        const auto lhs = weighted_schwarzian(f, psi, eta, 0);
        const RSeries h = eta - derivative(psi) * invert(psi);
        const RSeries psi_inv = invert(psi);
        const RSeries rhs = psi_inv * psi_inv * ode_reduce(h, schwarzian(f));
        CHECK(lhs.t_power == 2);
        CHECK(lhs.series.order() >= 20);
        CHECK(equal_up_to_shared_order(lhs.series, rhs));
    }
}

TEST_CASE("series JSON")
{
    const RSeries s = RSeries::from_terms("q", 6, {{-1, Rational(1)}, {2, make_rational(-3, 4)}});
    const auto j = series_to_json(s);
    CHECK(j["order"] == 6);
    CHECK(j["min_exp"] == -1);
    CHECK(j["terms"][1]["coeff"] == "-3/4");
    CHECK(series_from_json(j) == s);
    CHECK_THROWS_AS(series_from_json(nlohmann::json{{"var", "q"}}), std::invalid_argument);
    CHECK_THROWS_AS(series_from_json(nlohmann::json::parse(
                        R"({"var":"q","min_exp":0,"order":2,"terms":[{"exp":3,"coeff":"1"}]})")),
                    std::invalid_argument);
}

TEST_CASE("display")
{
    CHECK(to_display(poly({{1, 1}, {4, -5}}, 7)) == "q - 5*q^4 + O(q^7)");
    CHECK(to_display(RSeries::zero("q", 3)) == "O(q^3)");
}
