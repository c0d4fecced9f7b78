#include <qseries/cohomology.hpp>

#include <sstream>
#include <stdexcept>

namespace qseries
{

CohomologyElement::CohomologyElement(int hbar_cap) : m_cap(hbar_cap)
{
    if (hbar_cap < 0)
        throw std::invalid_argument("hbar cap must be nonnegative");
}

CohomologyElement CohomologyElement::constant(const Rational &c, int hbar_cap)
{
    return monomial({0, 0, 0}, c, hbar_cap);
}

CohomologyElement CohomologyElement::monomial(CohMonomial m, const Rational &c, int hbar_cap)
{
    CohomologyElement e(hbar_cap);
    e.add_term(m, c);
    return e;
}

Rational CohomologyElement::coeff(CohMonomial m) const
{
    if (m.c > m_cap)
        throw std::out_of_range("hbar^-" + std::to_string(m.c) + " lies beyond the hbar cap "
                                + std::to_string(m_cap));
    auto it = m_terms.find(m);
    return it == m_terms.end() ? Rational(0) : it->second;
}

void CohomologyElement::add_term(CohMonomial m, const Rational &c)
{
    if (m.a < 0 || m.b < 0 || m.c < 0)
        throw std::invalid_argument("negative exponent in cohomology monomial");
    if (m.a >= x1_nil || m.b >= x2_nil || m.c > m_cap || sgn(c) == 0)
        return;
    Rational &slot = m_terms[m];
    slot += c;
    if (sgn(slot) == 0)
        m_terms.erase(m);
}

CohomologyElement CohomologyElement::hbar_part(int c) const
{
    CohomologyElement r(m_cap);
    for (const auto &[m, v] : m_terms)
        if (m.c == c)
            r.m_terms.emplace(m, v);
    if (c > m_cap)
        throw std::out_of_range("hbar part beyond the hbar cap");
    return r;
}

CohomologyElement operator+(const CohomologyElement &p, const CohomologyElement &q)
{
    CohomologyElement r(std::min(p.m_cap, q.m_cap));
    for (const auto &[m, v] : p.m_terms)
        r.add_term(m, v);
    for (const auto &[m, v] : q.m_terms)
        r.add_term(m, v);
    return r;
}

CohomologyElement operator-(const CohomologyElement &p, const CohomologyElement &q)
{
    return p + q * Rational(-1);
}

CohomologyElement operator*(const CohomologyElement &p, const CohomologyElement &q)
{
    CohomologyElement r(std::min(p.m_cap, q.m_cap));
    for (const auto &[m1, v1] : p.m_terms)
        for (const auto &[m2, v2] : q.m_terms)
            r.add_term({m1.a + m2.a, m1.b + m2.b, m1.c + m2.c}, v1 * v2);
    return r;
}

CohomologyElement operator*(const CohomologyElement &p, const Rational &s)
{
    CohomologyElement r(p.m_cap);
    for (const auto &[m, v] : p.m_terms)
        r.add_term(m, v * s);
    return r;
}

bool operator==(const CohomologyElement &p, const CohomologyElement &q)
{
    return p.m_cap == q.m_cap && p.m_terms == q.m_terms;
}

std::string CohomologyElement::to_string() const
{
    if (m_terms.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, v] : m_terms) {
        os << (first ? "" : " + ") << qseries::to_string(v);
        if (m.a)
            os << "*x1";
        if (m.b)
            os << "*x2^" << m.b;
        if (m.c)
            os << "*hbar^-" << m.c;
        first = false;
    }
    return os.str();
}

namespace
{

void require_no_constant(const CohomologyElement &x, const char *what)
{
    if (sgn(x.coeff({0, 0, 0})) != 0)
        throw std::domain_error(std::string(what) + ": argument must have no constant term");
}

// Any product of more than this many constant-free factors vanishes: each
// factor raises a, b or c.
int nilpotency_bound(const CohomologyElement &x)
{
    return CohomologyElement::x1_nil + CohomologyElement::x2_nil + x.hbar_cap();
}

} // namespace

CohomologyElement inverse_shifted(const Rational &i, const CohomologyElement &x)
{
    if (sgn(i) == 0)
        throw std::domain_error("inverse_shifted: zero shift");
    require_no_constant(x, "inverse_shifted");
    // 1/(i + x) = sum_n (-x)^n / i^{n+1}
    const Rational inv = 1 / i;
    CohomologyElement term = CohomologyElement::constant(inv, x.hbar_cap());
    CohomologyElement sum = term;
    for (int n = 1; n <= nilpotency_bound(x) && !term.is_zero(); ++n) {
        term = term * x * (-inv);
        sum = sum + term;
    }
    return sum;
}

CohomologyElement exp_nilpotent(const CohomologyElement &x)
{
    require_no_constant(x, "exp_nilpotent");
    CohomologyElement term = CohomologyElement::constant(1, x.hbar_cap());
    CohomologyElement sum = term;
    for (int n = 1; n <= nilpotency_bound(x) && !term.is_zero(); ++n) {
        term = term * x * make_rational(1, n);
        sum = sum + term;
    }
    return sum;
}

} // namespace qseries
