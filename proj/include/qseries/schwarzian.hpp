#ifndef QSERIES_SCHWARZIAN_HPP
#define QSERIES_SCHWARZIAN_HPP

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include <qseries/series.hpp>

namespace qseries
{

namespace detail
{

template <typename C>
void require_invertible_derivative(const Series<C> &f)
{
    if (f.order() < 2)
        throw std::domain_error("schwarzian: linear coefficient of f is unknown");
    if (!ring_traits<C>::is_zero(f.coeff_or_zero(-1)) || f.valuation() < 1)
        throw std::domain_error("schwarzian: f must vanish at 0");
    if (!ring_traits<C>::is_unit(f.coeff(1)))
        throw std::domain_error("schwarzian: f'(0) is not invertible");
}

} // namespace detail

// S_q f = (f''/f')' - (f''/f')^2 / 2. Known through order(f) - 3.
template <typename C>
Series<C> schwarzian(const Series<C> &f)
{
    detail::require_invertible_derivative(f);
    const Series<C> d1 = derivative(f);
    const Series<C> u = derivative(d1) * invert(d1);
    return derivative(u) - scale_rational(u * u, make_rational(1, 2));
}

// f / (a + b f); preserves the Schwarzian.
template <typename C>
Series<C> mobius(const Series<C> &f, const C &a, const C &b)
{
    if (ring_traits<C>::is_zero(a))
        throw std::invalid_argument("mobius: a must be nonzero");
    return f * invert(add_constant(scale(f, b), a));
}

// Unique f = a1 q + a2 q^2 + ... with S_q f + g = 0.
//
// With u = f''/f' the equation is the Riccati equation u' = u^2/2 - g, which
// fixes u coefficient by coefficient from u(0) = 2 a2 / a1; then
// f = integral of a1 exp(integral u). The result is known through order(g) + 3.
template <typename C>
Series<C> solve_schwarzian(const Series<C> &g, const C &a1, const C &a2)
{
    using T = ring_traits<C>;
    if (T::is_zero(a1))
        throw std::invalid_argument("solve_schwarzian: a1 must be nonzero");
    if (!T::is_unit(a1))
        throw std::invalid_argument("solve_schwarzian: a1 must be invertible");
    detail::require_power_series(g, "solve_schwarzian");
    const int n_g = std::max(g.order(), 0);
    std::vector<C> u(static_cast<std::size_t>(n_g + 1), T::zero());
    u[0] = C(C(a2 * Rational(2)) * T::inverse(a1));
    for (int n = 0; n < n_g; ++n) {
        C sq = T::zero();
        for (int i = 0; i <= n; ++i)
            sq = C(sq + C(u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(n - i)]));
        const C rhs = C(C(sq * make_rational(1, 2)) - g.coeff(n));
        u[static_cast<std::size_t>(n + 1)] = C(rhs * make_rational(1, n + 1));
    }
    const Series<C> u_series(g.var(), 0, n_g + 1, std::move(u));
    const Series<C> f_prime = scale(exp(antiderivative(u_series)), a1);
    return antiderivative(f_prime);
}

// Basis (s0, s1) of s'' + h s' - (k/2) s = 0 with s0(0) = 1, s0'(0) = 0,
// s1(0) = 0, s1'(0) = 1. Known through min(order(h), order(k)) + 2.
template <typename C>
std::pair<Series<C>, Series<C>> solve_ode2(const Series<C> &h, const Series<C> &k)
{
    using T = ring_traits<C>;
    detail::require_same_var(h, k);
    detail::require_power_series(h, "solve_ode2");
    detail::require_power_series(k, "solve_ode2");
    const int n_in = std::max(std::min(h.order(), k.order()), 0);
    const int n_out = n_in + 2;
    auto solve = [&](const C &s_0, const C &s_1) {
        std::vector<C> s(static_cast<std::size_t>(n_out), T::zero());
        s[0] = s_0;
        if (n_out > 1)
            s[1] = s_1;
        for (int n = 0; n + 2 < n_out; ++n) {
            C acc = T::zero();
            for (int j = 0; j <= n; ++j) {
                const C hj = h.coeff(j);
                if (!T::is_zero(hj))
                    acc = C(acc - C(C(hj * Rational(n - j + 1)) * s[static_cast<std::size_t>(n - j + 1)]));
                const C kj = k.coeff(j);
                if (!T::is_zero(kj))
                    acc = C(acc + C(C(kj * make_rational(1, 2)) * s[static_cast<std::size_t>(n - j)]));
            }
            s[static_cast<std::size_t>(n + 2)] = C(acc * make_rational(1, (n + 2) * (n + 1)));
        }
        return Series<C>(h.var(), 0, n_out, std::move(s));
    };
    return {solve(T::one(), T::zero()), solve(T::zero(), T::one())};
}

// g = k + h' + h^2/2: the inhomogeneous term for which s1/s0 solves S f + g = 0.
template <typename C>
Series<C> ode_reduce(const Series<C> &h, const Series<C> &k)
{
    return k + derivative(h) + scale_rational(h * h, make_rational(1, 2));
}

// A value of Q[t, t^-1][[q]] concentrated in a single t-power.
template <typename C>
struct Weighted {
    int t_power = 0;
    Series<C> series;
};

// The twisted derivation d_{q,t} x = t psi^-1 (x' + (w/2) eta x) on weight-w
// elements; raises the weight (and t-power) by 2 and 1 respectively.
template <typename C>
Series<C> weighted_derivative(const Series<C> &x, int weight, const Series<C> &psi_inv, const Series<C> &eta)
{
    return psi_inv * (derivative(x) + scale_rational(eta * x, make_rational(weight, 2)));
}

// S_{q,t} f = D^3 f / D f - (3/2) (D^2 f / D f)^2 for the twisted derivation D.
template <typename C>
Weighted<C> weighted_schwarzian(const Series<C> &f, const Series<C> &psi, const Series<C> &eta, int weight)
{
    using T = ring_traits<C>;
    if (psi.order() < 1 || psi.valuation() < 0 || !T::is_zero(C(psi.coeff(0) - T::one())))
        throw std::domain_error("weighted_schwarzian: psi(0) must be 1");
    detail::require_power_series(psi, "weighted_schwarzian");
    detail::require_invertible_derivative(f);
    const Series<C> psi_inv = invert(psi);
    const Series<C> d1 = weighted_derivative(f, weight, psi_inv, eta);
    const Series<C> d2 = weighted_derivative(d1, weight + 2, psi_inv, eta);
    const Series<C> d3 = weighted_derivative(d2, weight + 4, psi_inv, eta);
    const Series<C> d1_inv = invert(d1);
    const Series<C> r = d2 * d1_inv;
    return {2, d3 * d1_inv - scale_rational(r * r, make_rational(3, 2))};
}

} // namespace qseries

#endif
