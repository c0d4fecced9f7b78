#ifndef QSERIES_NOVIKOV_HPP
#define QSERIES_NOVIKOV_HPP

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <qseries/rational.hpp>
#include <qseries/series.hpp>

namespace qseries
{

using Point = std::vector<long long>;
using Covector = std::vector<long long>;

// Coefficients of a degree-2 class in the basis [dE], [M], D_1, ..., D_r.
using ClassVec = std::vector<Rational>;

// Finite stand-in for the Novikov finiteness condition: at filtration level
// k a lattice point A may only carry a coefficient if |D_j . A| <= base +
// slope * |k| for every j.
struct SupportBox {
    long long base = 32;
    long long slope = 32;
    long long radius(int level) const;
};

// Thrown when a computation needs a lattice point outside the support box.
class SupportOverflow : public std::runtime_error
{
public:
    SupportOverflow(int level, const std::string &what) : std::runtime_error(what), m_level(level) {}
    int level() const { return m_level; }

private:
    int m_level;
};

// H = Z^{r+2} with the functionals m (pairing with M), e (pairing with dE),
// the class A* (m = 1, e = -1), a basis A_1..A_r of ker m and ker e, and
// covectors D_1..D_r with D_k . A* = 0 such that {e, m, D_1..D_r} is a
// rational basis of the dual lattice.
class LatticeSpec
{
public:
    // Throws std::invalid_argument if any of the conditions above fails. With
    // require_dual, also insists on D_k . A_j = delta_kj.
    static std::shared_ptr<const LatticeSpec> make(Covector m, Covector e, Point a_star, std::vector<Point> a_basis,
                                                   std::vector<Covector> d_basis, SupportBox box = {},
                                                   bool require_dual = false);

    int rank() const { return static_cast<int>(m_m.size()); }
    int r() const { return rank() - 2; }
    const Covector &m() const { return m_m; }
    const Covector &e() const { return m_e; }
    const Point &a_star() const { return m_a_star; }
    const std::vector<Point> &a_basis() const { return m_a_basis; }
    const std::vector<Covector> &d_basis() const { return m_d_basis; }
    const SupportBox &box() const { return m_box; }
    bool dual_pairing() const { return m_dual; }

    long long m_of(const Point &a) const { return pair(m_m, a); }
    long long e_of(const Point &a) const { return pair(m_e, a); }
    long long d_of(int k, const Point &a) const { return pair(m_d_basis.at(static_cast<std::size_t>(k)), a); }

    // c . A for a class in the basis [dE], [M], D_1..D_r.
    Rational pairing(const ClassVec &c, const Point &a) const;

    // The lattice point with the given m, e and D-pairings, if it is integral.
    std::optional<Point> find_point(long long m, long long e, const std::vector<long long> &d) const;

    bool in_box(const Point &a) const;

    static long long pair(const Covector &c, const Point &a);

private:
    Covector m_m;
    Covector m_e;
    Point m_a_star;
    std::vector<Point> m_a_basis;
    std::vector<Covector> m_d_basis;
    SupportBox m_box;
    bool m_dual = false;
};

using LatticePtr = std::shared_ptr<const LatticeSpec>;

Point add_points(const Point &a, const Point &b);
Point scale_point(const Point &a, long long k);

// Homogeneous element sum x_A q^A of degree i = 2 m(A). Coefficients at
// filtration levels e(A) <= cap are known; higher levels are truncated away.
class NovikovElement
{
public:
    NovikovElement(LatticePtr lattice, int degree, int cap);

    static NovikovElement monomial(LatticePtr lattice, const Point &a, const Rational &c, int cap);
    static NovikovElement one(LatticePtr lattice, int cap);

    const LatticePtr &lattice() const { return m_lattice; }
    int degree() const { return m_degree; }
    int cap() const { return m_cap; }
    const std::map<Point, Rational> &terms() const { return m_terms; }
    bool is_zero() const { return m_terms.empty(); }

    Rational coeff(const Point &a) const;
    // Adds c q^A. Terms above the cap are dropped; a point of the wrong degree
    // throws std::invalid_argument; a point outside the box throws SupportOverflow.
    void add_term(const Point &a, const Rational &c);

    // Lowest level carrying a nonzero term (cap + 1 if none).
    int valuation() const;
    NovikovElement level_part(int level) const;
    NovikovElement truncated(int cap) const;

    friend NovikovElement operator+(const NovikovElement &a, const NovikovElement &b);
    friend NovikovElement operator-(const NovikovElement &a, const NovikovElement &b);
    friend NovikovElement operator*(const NovikovElement &a, const NovikovElement &b);
    friend NovikovElement operator*(const NovikovElement &a, const Rational &s);
    // Equality of known terms up to the smaller cap; degrees must match.
    friend bool equal_up_to_cap(const NovikovElement &a, const NovikovElement &b);

private:
    LatticePtr m_lattice;
    int m_degree;
    int m_cap;
    std::map<Point, Rational> m_terms;
};

// Inverse of an element whose lowest level part is a single monomial.
NovikovElement invert(const NovikovElement &a);

// One term (A, z_A) of a degree-2 class z = sum z_A q^A.
struct DerivationTerm {
    Point shift;
    ClassVec cls;
};

// d_z(q^B) = sum_A (z_A . B) q^{A + B} for z in [dE] q^{A*} + H^2(Lambda^2_{>=0}).
class Derivation
{
public:
    // Merges repeated points. Throws std::invalid_argument unless every term
    // has m(A) = 1, the only level -1 term is ([dE], A*), and e(A) >= 0 otherwise.
    Derivation(LatticePtr lattice, std::vector<DerivationTerm> terms);

    const LatticePtr &lattice() const { return m_lattice; }
    const std::vector<DerivationTerm> &terms() const { return m_terms; }

    // Known through cap(f) - 1.
    NovikovElement apply(const NovikovElement &f) const;

    // True when every class lies in the span of [dE] and [M].
    bool satisfies_span_condition() const;

private:
    LatticePtr m_lattice;
    std::vector<DerivationTerm> m_terms;
};

// The unique f in f0 + Lambda_{>=1} with d_z f = 0, through level cap.
// f0 must be concentrated at level 0.
NovikovElement solve_flat(const Derivation &z, const NovikovElement &f0, int cap);

// S_z f = d^3 f / d f - (3/2) (d^2 f / d f)^2. Requires the level-1 part of f
// to be a single monomial and nothing below level 1.
NovikovElement novikov_schwarzian(const Derivation &z, const NovikovElement &f);

// f / (a + b f).
NovikovElement novikov_mobius(const NovikovElement &f, const NovikovElement &a, const NovikovElement &b);

// Solves S_z f = g for g of degree 4 at levels >= 0, known through cap(g).
// Returns the representative in q^{-A*} + Lambda^{-2}_{>=3} divided by the
// flat extension of q^B with m(B) = -(degree + 2)/2, e(B) = 0 and D(B) = 0, so
// the result has the requested (even) degree. Known through cap(g) + 3.
NovikovElement solve_novikov_schwarzian(const Derivation &z, const NovikovElement &g, int degree);

// K(q^A) = t^{m(A)} q^{e(A)}: the t-power is degree / 2.
struct TSeries {
    int t_power = 0;
    RSeries series;
};
TSeries specialize_K(const NovikovElement &f);

// Under the span condition, psi and eta with K(z) = t psi^-1 (q^-1 [dE] + eta [M]),
// through order N. Empty when some class has a D-component.
struct PencilFromLattice {
    RSeries psi;
    RSeries eta;
};
std::optional<PencilFromLattice> pencil_from_derivation(const Derivation &z, int order);

} // namespace qseries

#endif
