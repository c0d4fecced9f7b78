#ifndef QSERIES_SERIES_HPP
#define QSERIES_SERIES_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <qseries/rational.hpp>
#include <qseries/ring.hpp>

namespace qseries
{

// Truncated Laurent series sum_{e = min_exp}^{order - 1} c_e var^e + O(var^order)
// over a coefficient ring C.
//
// Coefficients are stored densely from min_exp. The truncation order records
// how far the coefficients are actually known; every operation below computes
// the order its result can vouch for, and reading a coefficient at or past the
// order throws.
template <typename C>
class Series
{
public:
    using coeff_type = C;
    using traits = ring_traits<C>;

    Series() : Series("q", 0, 0, {}) {}

    Series(std::string var, int min_exp, int order, std::vector<C> coeffs)
        : m_var(std::move(var)), m_min(min_exp), m_order(order), m_c(std::move(coeffs))
    {
        if (m_order <= m_min) {
            m_min = m_order;
            m_c.clear();
            return;
        }
        m_c.resize(static_cast<std::size_t>(m_order - m_min), traits::zero());
    }

    static Series zero(std::string var, int order)
    {
        return Series(std::move(var), std::min(0, order), order, {});
    }
    static Series constant(std::string var, const C &c, int order)
    {
        return monomial(std::move(var), 0, c, order);
    }
    static Series one(std::string var, int order)
    {
        return constant(std::move(var), traits::one(), order);
    }
    static Series monomial(std::string var, int exp, const C &c, int order)
    {
        Series s(std::move(var), std::min(exp, order), order, {});
        if (exp < order)
            s.m_c[static_cast<std::size_t>(exp - s.m_min)] = c;
        return s;
    }
    // The variable itself, var + O(var^order).
    static Series gen(std::string var, int order)
    {
        return monomial(std::move(var), 1, traits::one(), order);
    }
    static Series from_terms(std::string var, int order, const std::map<int, C> &terms)
    {
        int lo = order;
        for (const auto &[e, c] : terms)
            lo = std::min(lo, e);
        Series s(std::move(var), lo, order, {});
        for (const auto &[e, c] : terms)
            if (e < order)
                s.m_c[static_cast<std::size_t>(e - s.m_min)] = c;
        return s;
    }

    const std::string &var() const { return m_var; }
    int min_exp() const { return m_min; }
    int order() const { return m_order; }

    bool known(int e) const { return e < m_order; }

    C coeff(int e) const
    {
        if (e >= m_order)
            throw std::out_of_range("coefficient of " + m_var + "^" + std::to_string(e)
                                    + " is beyond the truncation order " + std::to_string(m_order));
        if (e < m_min)
            return traits::zero();
        return m_c[static_cast<std::size_t>(e - m_min)];
    }

    void set_coeff(int e, const C &c)
    {
        if (e >= m_order)
            throw std::out_of_range("cannot set coefficient past the truncation order");
        if (e < m_min) {
            m_c.insert(m_c.begin(), static_cast<std::size_t>(m_min - e), traits::zero());
            m_min = e;
        }
        m_c[static_cast<std::size_t>(e - m_min)] = c;
    }

    // Lowest exponent with a nonzero coefficient; order() if none is known.
    int valuation() const
    {
        for (std::size_t i = 0; i < m_c.size(); ++i)
            if (!traits::is_zero(m_c[i]))
                return m_min + static_cast<int>(i);
        return m_order;
    }

    bool is_zero() const { return valuation() == m_order; }

    Series truncated(int order) const
    {
        if (order >= m_order)
            return *this;
        std::vector<C> c(m_c.begin(), m_c.begin() + std::max(0, order - m_min));
        return Series(m_var, m_min, order, std::move(c));
    }

    Series renamed(std::string var) const
    {
        Series s = *this;
        s.m_var = std::move(var);
        return s;
    }

    std::map<int, C> terms() const
    {
        std::map<int, C> t;
        for (std::size_t i = 0; i < m_c.size(); ++i)
            if (!traits::is_zero(m_c[i]))
                t.emplace(m_min + static_cast<int>(i), m_c[i]);
        return t;
    }

    Series &operator+=(const Series &o) { return *this = *this + o; }
    Series &operator-=(const Series &o) { return *this = *this - o; }
    Series &operator*=(const Series &o) { return *this = *this * o; }

    friend bool operator==(const Series &a, const Series &b)
    {
        return a.m_var == b.m_var && a.m_order == b.m_order && a.terms_equal(b, a.m_order);
    }

    bool terms_equal(const Series &b, int upto) const
    {
        const int lo = std::min(m_min, b.m_min);
        for (int e = lo; e < upto; ++e)
            if (!traits::is_zero(C(coeff_or_zero(e) - b.coeff_or_zero(e))))
                return false;
        return true;
    }

    C coeff_or_zero(int e) const
    {
        if (e < m_min || e >= m_order)
            return traits::zero();
        return m_c[static_cast<std::size_t>(e - m_min)];
    }

private:
    std::string m_var;
    int m_min;
    int m_order;
    std::vector<C> m_c;
};

namespace detail
{

template <typename C>
void require_same_var(const Series<C> &a, const Series<C> &b)
{
    if (a.var() != b.var())
        throw std::invalid_argument("series variable mismatch: '" + a.var() + "' vs '" + b.var() + "'");
}

} // namespace detail

template <typename C>
Series<C> operator+(const Series<C> &a, const Series<C> &b)
{
    detail::require_same_var(a, b);
    const int order = std::min(a.order(), b.order());
    const int lo = std::min({a.min_exp(), b.min_exp(), order});
    std::vector<C> c;
    c.reserve(static_cast<std::size_t>(std::max(0, order - lo)));
    for (int e = lo; e < order; ++e)
        c.push_back(C(a.coeff_or_zero(e) + b.coeff_or_zero(e)));
    return Series<C>(a.var(), lo, order, std::move(c));
}

template <typename C>
Series<C> operator-(const Series<C> &a)
{
    std::vector<C> c;
    for (int e = a.min_exp(); e < a.order(); ++e)
        c.push_back(C(-a.coeff(e)));
    return Series<C>(a.var(), a.min_exp(), a.order(), std::move(c));
}

template <typename C>
Series<C> operator-(const Series<C> &a, const Series<C> &b)
{
    return a + (-b);
}

// Scalar multiplication; keeps the truncation order.
template <typename C>
Series<C> scale(const Series<C> &a, const C &s)
{
    std::vector<C> c;
    for (int e = a.min_exp(); e < a.order(); ++e)
        c.push_back(C(a.coeff(e) * s));
    return Series<C>(a.var(), a.min_exp(), a.order(), std::move(c));
}

template <typename C>
Series<C> scale_rational(const Series<C> &a, const Rational &s)
{
    std::vector<C> c;
    for (int e = a.min_exp(); e < a.order(); ++e)
        c.push_back(C(a.coeff(e) * s));
    return Series<C>(a.var(), a.min_exp(), a.order(), std::move(c));
}

// a + s (s added to the constant term). The constant term must be known.
template <typename C>
Series<C> add_constant(const Series<C> &a, const C &s)
{
    if (a.order() <= 0)
        throw std::invalid_argument("constant term lies beyond the truncation order");
    Series<C> r = a;
    r.set_coeff(0, C(a.coeff(0) + s));
    return r;
}

// Multiplication by var^k (exact; order shifts with it).
template <typename C>
Series<C> shift(const Series<C> &a, int k)
{
    std::vector<C> c;
    for (int e = a.min_exp(); e < a.order(); ++e)
        c.push_back(a.coeff(e));
    return Series<C>(a.var(), a.min_exp() + k, a.order() + k, std::move(c));
}

// Cauchy product. With v = valuation and N = order, the product is known
// through min(N_a + v_b, N_b + v_a).
template <typename C>
Series<C> operator*(const Series<C> &a, const Series<C> &b)
{
    detail::require_same_var(a, b);
    const int va = a.valuation();
    const int vb = b.valuation();
    const int order = std::min(a.order() + vb, b.order() + va);
    const int lo = std::min(va + vb, order);
    std::vector<C> c(static_cast<std::size_t>(order - lo), ring_traits<C>::zero());
    for (int i = va; i < a.order(); ++i) {
        const C ai = a.coeff(i);
        if (ring_traits<C>::is_zero(ai))
            continue;
        for (int j = vb; j < b.order() && i + j < order; ++j) {
            const C bj = b.coeff(j);
            if (ring_traits<C>::is_zero(bj))
                continue;
            auto &slot = c[static_cast<std::size_t>(i + j - lo)];
            slot = C(slot + C(ai * bj));
        }
    }
    return Series<C>(a.var(), lo, order, std::move(c));
}

template <typename C>
Series<C> operator*(const Series<C> &a, const C &s)
{
    return scale(a, s);
}

// Multiplicative inverse. The lowest known nonzero coefficient must be a unit;
// for a = var^v (u + ...) known to order N the inverse is known to order N - 2v.
template <typename C>
Series<C> invert(const Series<C> &a)
{
    using T = ring_traits<C>;
    const int v = a.valuation();
    if (v >= a.order())
        throw std::domain_error("cannot invert a series with no known nonzero coefficient");
    const C lead = a.coeff(v);
    if (!T::is_unit(lead))
        throw std::domain_error("leading coefficient of the series is not invertible");
    const C inv_lead = T::inverse(lead);
    const int rel = a.order() - v;
    std::vector<C> b(static_cast<std::size_t>(rel), T::zero());
    b[0] = inv_lead;
    for (int n = 1; n < rel; ++n) {
        C acc = T::zero();
        for (int k = 1; k <= n; ++k) {
            const C ak = a.coeff(v + k);
            if (!T::is_zero(ak))
                acc = C(acc + C(ak * b[static_cast<std::size_t>(n - k)]));
        }
        b[static_cast<std::size_t>(n)] = C(C(-acc) * inv_lead);
    }
    return Series<C>(a.var(), -v, -v + rel, std::move(b));
}

template <typename C>
Series<C> operator/(const Series<C> &a, const Series<C> &b)
{
    return a * invert(b);
}

template <typename C>
Series<C> derivative(const Series<C> &a)
{
    std::vector<C> c;
    const int lo = a.min_exp() - 1;
    for (int e = a.min_exp(); e < a.order(); ++e)
        c.push_back(C(a.coeff(e) * Rational(e)));
    return Series<C>(a.var(), lo, a.order() - 1, std::move(c));
}

// Right inverse of derivative with the given constant term. Refuses a nonzero
// (or unknown) var^-1 coefficient, which has no formal antiderivative.
template <typename C>
Series<C> antiderivative(const Series<C> &a, const C &constant)
{
    using T = ring_traits<C>;
    if (a.order() <= -1)
        throw std::domain_error("antiderivative: the " + a.var() + "^-1 coefficient is unknown");
    if (!T::is_zero(a.coeff(-1)))
        throw std::domain_error("antiderivative: nonzero " + a.var() + "^-1 coefficient");
    const int order = a.order() + 1;
    const int lo = std::min(a.min_exp() + 1, 0);
    Series<C> r(a.var(), lo, order, {});
    for (int e = a.min_exp(); e < a.order(); ++e) {
        if (e == -1)
            continue;
        const C c = a.coeff(e);
        if (!T::is_zero(c))
            r.set_coeff(e + 1, C(c * make_rational(1, e + 1)));
    }
    r.set_coeff(0, constant);
    return r;
}

template <typename C>
Series<C> antiderivative(const Series<C> &a)
{
    return antiderivative(a, ring_traits<C>::zero());
}

namespace detail
{

template <typename C>
void require_power_series(const Series<C> &a, const char *what)
{
    for (int e = a.min_exp(); e < std::min(0, a.order()); ++e)
        if (!ring_traits<C>::is_zero(a.coeff(e)))
            throw std::domain_error(std::string(what) + ": negative powers present");
}

} // namespace detail

// exp(a) for a with zero constant term.
template <typename C>
Series<C> exp(const Series<C> &a)
{
    using T = ring_traits<C>;
    detail::require_power_series(a, "exp");
    if (a.order() <= 0)
        throw std::domain_error("exp: constant term unknown");
    if (!T::is_zero(a.coeff(0)))
        throw std::domain_error("exp: constant term must vanish");
    const int n_max = a.order();
    std::vector<C> r(static_cast<std::size_t>(n_max), T::zero());
    r[0] = T::one();
    for (int n = 1; n < n_max; ++n) {
        C acc = T::zero();
        for (int k = 1; k <= n; ++k) {
            const C ak = a.coeff(k);
            if (!T::is_zero(ak))
                acc = C(acc + C(C(ak * Rational(k)) * r[static_cast<std::size_t>(n - k)]));
        }
        r[static_cast<std::size_t>(n)] = C(acc * make_rational(1, n));
    }
    return Series<C>(a.var(), 0, n_max, std::move(r));
}

// log(a) for a with constant term 1.
template <typename C>
Series<C> log(const Series<C> &a)
{
    using T = ring_traits<C>;
    detail::require_power_series(a, "log");
    if (a.order() <= 0)
        throw std::domain_error("log: constant term unknown");
    if (!T::is_zero(C(a.coeff(0) - T::one())))
        throw std::domain_error("log: constant term must be 1");
    if (a.order() == 1)
        return Series<C>::zero(a.var(), 1);
    return antiderivative(derivative(a) * invert(a));
}

// Integer power (negative exponents go through invert). a^0 is 1, known as
// far as a's unit part is.
template <typename C>
Series<C> pow(const Series<C> &a, int k)
{
    if (k < 0)
        return pow(invert(a), -k);
    if (k == 0)
        return Series<C>::one(a.var(), std::max(a.order() - a.valuation(), 1));
    std::optional<Series<C>> result;
    Series<C> base = a;
    while (k > 0) {
        if (k & 1)
            result = result ? *result * base : base;
        k >>= 1;
        if (k > 0)
            base = base * base;
    }
    return *result;
}

// n-th root with leading coefficient 1: a = var^{kn}(1 + ...) maps to
// var^k (1 + ...).
template <typename C>
Series<C> nth_root(const Series<C> &a, int n)
{
    using T = ring_traits<C>;
    if (n < 1)
        throw std::invalid_argument("nth_root: n must be positive");
    const int v = a.valuation();
    if (v >= a.order())
        throw std::domain_error("nth_root: no known nonzero coefficient");
    if (v % n != 0)
        throw std::domain_error("nth_root: valuation not divisible by n");
    if (!T::is_zero(C(a.coeff(v) - T::one())))
        throw std::domain_error("nth_root: leading coefficient must be 1");
    const Series<C> unit = shift(a, -v);
    const Series<C> root = exp(scale_rational(log(unit), make_rational(1, n)));
    return shift(root, v / n);
}

// var -> var^k for k >= 1.
template <typename C>
Series<C> substitute_power(const Series<C> &a, int k)
{
    if (k < 1)
        throw std::invalid_argument("substitute_power: k must be positive");
    const long long order = static_cast<long long>(a.order()) * k;
    const int lo = a.min_exp() * k;
    std::vector<C> c(static_cast<std::size_t>(order - lo), ring_traits<C>::zero());
    for (int e = a.min_exp(); e < a.order(); ++e)
        c[static_cast<std::size_t>(e * k - lo)] = a.coeff(e);
    return Series<C>(a.var(), lo, static_cast<int>(order), std::move(c));
}

// outer(inner) for inner with positive valuation. The result order is the
// smallest of order(outer)*v(inner) and (e - 1)*v(inner) + order(inner) over
// the exponents e != 0 present in outer.
template <typename C>
Series<C> compose(const Series<C> &outer, const Series<C> &inner)
{
    const int v = inner.valuation();
    if (v >= inner.order())
        throw std::domain_error("compose: inner series has no known nonzero coefficient");
    if (v < 1)
        throw std::domain_error("compose: inner series must have zero constant term");
    const auto outer_terms = outer.terms();
    long long order = static_cast<long long>(outer.order()) * v;
    for (const auto &[e, c] : outer_terms)
        if (e != 0)
            order = std::min<long long>(order, static_cast<long long>(e - 1) * v + inner.order());
    const int n = static_cast<int>(order);
    Series<C> result = Series<C>::zero(inner.var(), n);
    if (outer_terms.empty())
        return result;
    const int lo = outer_terms.begin()->first;
    const int hi = outer_terms.rbegin()->first;
    // Powers inner^e, built incrementally from the lowest exponent present.
    Series<C> inner_t = inner.truncated(n - (lo - 1) * v);
    Series<C> power = lo == 0 ? Series<C>::one(inner.var(), n) : pow(inner_t, lo);
    for (int e = lo; e <= hi; ++e) {
        auto it = outer_terms.find(e);
        if (it != outer_terms.end())
            result = result + scale(power.truncated(n), it->second).truncated(n);
        if (e < hi)
            power = (power * inner_t).truncated(n);
    }
    return result.truncated(n);
}

// Compositional inverse of f = a1 var + O(var^2) (a1 a unit) by Lagrange
// inversion: [var^n] g = (1/n) [w^{n-1}] (w / f(w))^n.
template <typename C>
Series<C> revert(const Series<C> &f)
{
    using T = ring_traits<C>;
    detail::require_power_series(f, "revert");
    if (f.order() < 2)
        throw std::domain_error("revert: linear coefficient unknown");
    if (!T::is_zero(f.coeff(0)))
        throw std::domain_error("revert: f(0) must vanish");
    if (!T::is_unit(f.coeff(1)))
        throw std::domain_error("revert: f'(0) must be invertible");
    const int order = f.order();
    const Series<C> h = invert(shift(f, -1)); // w / f(w), known to order - 1
    Series<C> g = Series<C>::zero(f.var(), order);
    Series<C> hp = h;
    for (int n = 1; n < order; ++n) {
        g.set_coeff(n, C(hp.coeff(n - 1) * make_rational(1, n)));
        if (n + 1 < order)
            hp = hp * h;
    }
    return g;
}

// Comparison up to the smaller of the two truncation orders.
template <typename C>
bool equal_up_to_shared_order(const Series<C> &a, const Series<C> &b)
{
    detail::require_same_var(a, b);
    return a.terms_equal(b, std::min(a.order(), b.order()));
}

// First exponent (below the shared order) at which a and b differ.
template <typename C>
std::optional<int> first_difference(const Series<C> &a, const Series<C> &b)
{
    const int upto = std::min(a.order(), b.order());
    const int lo = std::min(a.min_exp(), b.min_exp());
    for (int e = lo; e < upto; ++e)
        if (!ring_traits<C>::is_zero(C(a.coeff_or_zero(e) - b.coeff_or_zero(e))))
            return e;
    return std::nullopt;
}

// Human-readable form, e.g. "q - 5*q^4 + O(q^14)". Needs operator<< for C.
template <typename C>
std::string to_display(const Series<C> &a)
{
    std::ostringstream os;
    bool first = true;
    for (const auto &[e, c] : a.terms()) {
        std::ostringstream cs;
        cs << c;
        std::string s = cs.str();
        const bool neg = !s.empty() && s[0] == '-';
        if (neg)
            s.erase(0, 1);
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        const bool unit = (s == "1");
        if (e == 0)
            os << s;
        else {
            if (!unit)
                os << s << "*";
            os << a.var();
            if (e != 1)
                os << "^" << e;
        }
    }
    os << (first ? "O(" : " + O(") << a.var() << "^" << a.order() << ")";
    return os.str();
}

using RSeries = Series<Rational>;

} // namespace qseries

#endif
