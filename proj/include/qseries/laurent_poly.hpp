#ifndef QSERIES_LAURENT_POLY_HPP
#define QSERIES_LAURENT_POLY_HPP

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <qseries/rational.hpp>
#include <qseries/ring.hpp>

namespace qseries
{

// Element of Q[q_1^{+-1}, ..., q_r^{+-1}]. Exponent vectors are stored with
// trailing zeros trimmed, so the number of variables never has to be fixed.
class LaurentPoly
{
public:
    using Exponent = std::vector<int>;

    LaurentPoly() = default;
    LaurentPoly(const Rational &c); // NOLINT: constants convert implicitly
    LaurentPoly(long c) : LaurentPoly(Rational(c)) {} // NOLINT

    static LaurentPoly monomial(Exponent e, const Rational &c);
    // The variable q_k (k counted from 1).
    static LaurentPoly variable(int k);

    const std::map<Exponent, Rational> &terms() const { return m_terms; }
    bool is_zero() const { return m_terms.empty(); }
    bool is_monomial() const { return m_terms.size() == 1; }
    Rational constant_term() const;
    void add_term(Exponent e, const Rational &c);

    friend LaurentPoly operator+(const LaurentPoly &a, const LaurentPoly &b);
    friend LaurentPoly operator-(const LaurentPoly &a, const LaurentPoly &b);
    friend LaurentPoly operator-(const LaurentPoly &a);
    friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b);
    friend LaurentPoly operator*(const LaurentPoly &a, const Rational &s);
    friend bool operator==(const LaurentPoly &a, const LaurentPoly &b) { return a.m_terms == b.m_terms; }
    friend std::ostream &operator<<(std::ostream &os, const LaurentPoly &p);

    std::string to_string() const;

private:
    static Exponent trim(Exponent e);
    std::map<Exponent, Rational> m_terms;
};

template <>
struct ring_traits<LaurentPoly> {
    static LaurentPoly zero() { return {}; }
    static LaurentPoly one() { return LaurentPoly(Rational(1)); }
    static LaurentPoly from_rational(const Rational &r) { return LaurentPoly(r); }
    static bool is_zero(const LaurentPoly &c) { return c.is_zero(); }
    static bool is_unit(const LaurentPoly &c) { return c.is_monomial(); }
    static LaurentPoly inverse(const LaurentPoly &c);
};

} // namespace qseries

#endif
