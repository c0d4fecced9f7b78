#include <qseries/laurent_poly.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qseries
{

LaurentPoly::Exponent LaurentPoly::trim(Exponent e)
{
    while (!e.empty() && e.back() == 0)
        e.pop_back();
    return e;
}

LaurentPoly::LaurentPoly(const Rational &c)
{
    add_term({}, c);
}

LaurentPoly LaurentPoly::monomial(Exponent e, const Rational &c)
{
    LaurentPoly p;
    p.add_term(std::move(e), c);
    return p;
}

LaurentPoly LaurentPoly::variable(int k)
{
    if (k < 1)
        throw std::invalid_argument("Laurent variables are numbered from 1");
    Exponent e(static_cast<std::size_t>(k), 0);
    e.back() = 1;
    return monomial(std::move(e), 1);
}

Rational LaurentPoly::constant_term() const
{
    auto it = m_terms.find({});
    return it == m_terms.end() ? Rational(0) : it->second;
}

void LaurentPoly::add_term(Exponent e, const Rational &c)
{
    if (sgn(c) == 0)
        return;
    e = trim(std::move(e));
    Rational &slot = m_terms[e];
    slot += c;
    if (sgn(slot) == 0)
        m_terms.erase(e);
}

LaurentPoly operator+(const LaurentPoly &a, const LaurentPoly &b)
{
    LaurentPoly r = a;
    for (const auto &[e, c] : b.m_terms)
        r.add_term(e, c);
    return r;
}

LaurentPoly operator-(const LaurentPoly &a)
{
    LaurentPoly r;
    for (const auto &[e, c] : a.m_terms)
        r.m_terms.emplace(e, -c);
    return r;
}

LaurentPoly operator-(const LaurentPoly &a, const LaurentPoly &b)
{
    return a + (-b);
}

LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b)
{
    LaurentPoly r;
    for (const auto &[e1, c1] : a.m_terms)
        for (const auto &[e2, c2] : b.m_terms) {
            LaurentPoly::Exponent e(std::max(e1.size(), e2.size()), 0);
            for (std::size_t i = 0; i < e1.size(); ++i)
                e[i] += e1[i];
            for (std::size_t i = 0; i < e2.size(); ++i)
                e[i] += e2[i];
            r.add_term(std::move(e), c1 * c2);
        }
    return r;
}

LaurentPoly operator*(const LaurentPoly &a, const Rational &s)
{
    LaurentPoly r;
    for (const auto &[e, c] : a.m_terms)
        r.add_term(e, c * s);
    return r;
}

std::string LaurentPoly::to_string() const
{
    if (m_terms.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[e, c] : m_terms) {
        if (!first)
            os << " + ";
        first = false;
        os << qseries::to_string(c);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] == 1)
                os << "*q" << i + 1;
            else if (e[i] != 0)
                os << "*q" << i + 1 << "^" << e[i];
    }
    return os.str();
}

std::ostream &operator<<(std::ostream &os, const LaurentPoly &p)
{
    if (p.m_terms.size() > 1)
        return os << "(" << p.to_string() << ")";
    return os << p.to_string();
}

LaurentPoly ring_traits<LaurentPoly>::inverse(const LaurentPoly &c)
{
    if (!c.is_monomial())
        throw std::domain_error("only monomials are invertible in a Laurent polynomial ring");
    const auto &[e, v] = *c.terms().begin();
    LaurentPoly::Exponent neg(e.size());
    std::transform(e.begin(), e.end(), neg.begin(), [](int x) { return -x; });
    return LaurentPoly::monomial(std::move(neg), 1 / v);
}

} // namespace qseries
