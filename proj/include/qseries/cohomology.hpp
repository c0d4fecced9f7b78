#ifndef QSERIES_COHOMOLOGY_HPP
#define QSERIES_COHOMOLOGY_HPP

#include <compare>
#include <map>
#include <string>

#include <qseries/rational.hpp>

namespace qseries
{

// Monomial x1^a x2^b hbar^-c.
struct CohMonomial {
    int a = 0;
    int b = 0;
    int c = 0;
    auto operator<=>(const CohMonomial &) const = default;
};

// Element of Q[x1, x2]/(x1^2, x2^5) [hbar^-1], truncated above hbar^-cap.
//
// The relations and the cap are applied on every product. Since products
// only raise the hbar^-1 power, coefficients at powers <= cap are exact; a
// coefficient above the cap is unknown and reading it throws.
class CohomologyElement
{
public:
    static constexpr int x1_nil = 2;
    static constexpr int x2_nil = 5;

    explicit CohomologyElement(int hbar_cap = 0);

    static CohomologyElement constant(const Rational &c, int hbar_cap);
    static CohomologyElement monomial(CohMonomial m, const Rational &c, int hbar_cap);

    int hbar_cap() const { return m_cap; }
    const std::map<CohMonomial, Rational> &terms() const { return m_terms; }

    Rational coeff(CohMonomial m) const;
    void add_term(CohMonomial m, const Rational &c);
    bool is_zero() const { return m_terms.empty(); }

    // Part of hbar^-c, as a map (a, b) -> coefficient.
    CohomologyElement hbar_part(int c) const;

    friend CohomologyElement operator+(const CohomologyElement &p, const CohomologyElement &q);
    friend CohomologyElement operator-(const CohomologyElement &p, const CohomologyElement &q);
    friend CohomologyElement operator*(const CohomologyElement &p, const CohomologyElement &q);
    friend CohomologyElement operator*(const CohomologyElement &p, const Rational &s);
    friend bool operator==(const CohomologyElement &p, const CohomologyElement &q);

    std::string to_string() const;

private:
    int m_cap;
    std::map<CohMonomial, Rational> m_terms;
};

// 1 / (i + x) for x with nilpotent x-part and no constant term, i != 0.
CohomologyElement inverse_shifted(const Rational &i, const CohomologyElement &x);

// exp(x) for x without constant term (nilpotent by the relations and cap).
CohomologyElement exp_nilpotent(const CohomologyElement &x);

// Class degree of a monomial with |x1| = |x2| = 2, |hbar^-1| = -2.
inline int class_degree(CohMonomial m)
{
    return 2 * m.a + 2 * m.b - 2 * m.c;
}

} // namespace qseries

#endif
