#ifndef QSERIES_AINFTY_HPP
#define QSERIES_AINFTY_HPP

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <qseries/series.hpp>

namespace qseries
{

// Finite graded basis. Signs use the reduced degree ||a|| = |a| - 1.
struct GradedBasis {
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::optional<int> unit;

    int dim() const { return static_cast<int>(degrees.size()); }
    int reduced(int i) const { return degrees.at(static_cast<std::size_t>(i)) - 1; }
};
using BasisPtr = std::shared_ptr<const GradedBasis>;

// Inputs (a_d, ..., a_1) in the order they are written: a_1 is the last entry.
using Tuple = std::vector<int>;

// Element of Hom^s(T(A[1]), A) truncated to arities <= arity_cap and to q-order
// q_order (coefficients mod q^{q_order}). The component of arity d maps
// a_d (x) ... (x) a_1 to an element of degree |a_1| + ... + |a_d| + s - d.
// Components above the arity cap are unknown, not zero.
class Cochain
{
public:
    using Entries = std::map<Tuple, std::map<int, RSeries>>;

    Cochain(BasisPtr basis, int degree, int arity_cap, int q_order);

    const BasisPtr &basis() const { return m_basis; }
    int degree() const { return m_degree; }
    // ||gamma|| = s - 1.
    int reduced_degree() const { return m_degree - 1; }
    int arity_cap() const { return m_arity_cap; }
    int q_order() const { return m_q_order; }
    const Entries &entries() const { return m_entries; }

    // Throws std::out_of_range above the arity cap.
    RSeries get(const Tuple &inputs, int output) const;
    // Entries above the arity cap are dropped; a degree mismatch throws
    // std::invalid_argument.
    void add(const Tuple &inputs, int output, const RSeries &c);
    void add(const Tuple &inputs, int output, const Rational &c, int q_power = 0);

    bool is_zero() const { return m_entries.empty(); }
    bool has_arity(int d) const;
    // Largest arity with a nonzero entry (-1 if none).
    int max_arity() const;
    // Lowest q-power present (q_order if zero).
    int q_valuation() const;
    // Coefficient of q^k as a q-constant cochain known mod q^{q_order}.
    Cochain q_coefficient(int k, int q_order = 1) const;
    Cochain truncated(int arity_cap, int q_order) const;
    Cochain arity_part(int d) const;
    // Entries with arity < d.
    Cochain below_arity(int d) const;

    friend Cochain operator+(const Cochain &a, const Cochain &b);
    friend Cochain operator-(const Cochain &a, const Cochain &b);
    friend Cochain operator*(const Cochain &a, const RSeries &s);
    friend Cochain operator*(const Cochain &a, const Rational &s);
    // Equality of all entries within the smaller caps.
    friend bool equal_up_to_caps(const Cochain &a, const Cochain &b);

private:
    void require_compatible(const Cochain &o) const;

    BasisPtr m_basis;
    int m_degree;
    int m_arity_cap;
    int m_q_order;
    Entries m_entries;
};

// The operations mu^d of degree 2 - d, d = 0..arity cap (mu^0 is the curvature).
struct AInfinityStructure {
    Cochain mu;

    const BasisPtr &basis() const { return mu.basis(); }
    // True when the curvature has no q-constant term.
    bool is_deformation() const;
};

// Components F^d, d >= 1, as a degree-1 cochain; no curvature term.
struct AInfinityMorphism {
    Cochain f;
};

// mu^2(a2, a1) = (-1)^{|a1|} a2 a1 for a graded associative product given as
// (a2, a1) -> {(output, coefficient)}; mu^{d != 2} = 0.
AInfinityStructure algebra_from_products(BasisPtr basis, const std::map<std::pair<int, int>, std::map<int, Rational>> &products,
                                         int arity_cap, int q_order);

// (f o g)^d = sum (-1)^{||g|| (||a_1|| + ... + ||a_i||)} f^{d-j+1}(a_d, ..., g^j(a_{i+j}, ..., a_{i+1}), a_i, ..., a_1).
Cochain circle(const Cochain &f, const Cochain &g);

// (x o F)^d = sum x^k(F^{i_k}(...), ..., F^{i_1}(...)).
Cochain compose(const Cochain &x, const AInfinityMorphism &f);

// All nonzero components of mu o mu up to arity d_max and q-order n_max.
struct Residual {
    Tuple inputs;
    int output;
    RSeries value;
};
std::vector<Residual> check_a_infinity(const AInfinityStructure &a, int d_max, int n_max);

// delta gamma = (-1)^{||gamma||} gamma o mu - mu o gamma.
Cochain hochschild_differential(const AInfinityStructure &a, const Cochain &gamma);

// d_q mu; known through q-order one less than mu.
Cochain kaledin_representative(const AInfinityStructure &a);

struct CoboundaryReport {
    std::optional<Cochain> beta;
    // First q-order at which delta beta = c has no solution, with the
    // right-hand side that could not be hit.
    std::optional<int> obstructed_order;
    std::optional<Cochain> obstruction;
    // Equations were imposed through this arity.
    int equation_arity = 0;
    // Conclusions about the untruncated complex hold through this arity.
    int valid_arity = 0;
};

// Thrown when the arity cap leaves no room for a single full equation.
class ArityCapError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Solves delta beta = c one q-order at a time, through q-order n - 1.
CoboundaryReport is_coboundary(const AInfinityStructure &a, const Cochain &c, int n);

AInfinityMorphism identity_morphism(BasisPtr basis, int arity_cap, int q_order);
AInfinityMorphism compose(const AInfinityMorphism &g, const AInfinityMorphism &f);
// Throws std::domain_error unless F^1 is invertible at q = 0.
AInfinityMorphism inverse(const AInfinityMorphism &f);

// Exponential of the coderivation of a degree-1 cochain c with q-valuation
// >= 1 and no arity-0 part: sum_n P_n / n! with P_0 = id, P_{n+1} = P_n o c.
AInfinityMorphism exp_cocycle(const Cochain &c);

// The structure mu' on the source for which F: (A, mu') -> (A, mu) is a
// morphism.
AInfinityStructure pullback(const AInfinityStructure &target, const AInfinityMorphism &f);
// The structure on the target for which F: (A, mu) -> (A, mu~) is a morphism.
AInfinityStructure pushforward(const AInfinityStructure &source, const AInfinityMorphism &f);
// mu_target(F, ..., F) - F o mu_source.
Cochain morphism_residual(const AInfinityMorphism &f, const AInfinityStructure &source, const AInfinityStructure &target);

// delta alpha + d_q mu; zero exactly when d_q + alpha is a connection.
Cochain connection_residual(const AInfinityStructure &a, const Cochain &alpha);

// The pre-connection d_q + alpha~ on the target of F matching d_q + alpha on
// the source: alpha~ o F = F o alpha - d_q F.
Cochain transport_connection(const AInfinityMorphism &f, const Cochain &alpha);

struct GaugeResult {
    // F^* mu_q = mu_const.
    AInfinityMorphism pullback_map;
    // The inverse: carries d_q + alpha to d_q.
    AInfinityMorphism trivializing_map;
    AInfinityStructure mu_const;
    Cochain alpha_final;
    int steps = 0;
};

// Throws std::invalid_argument if d_q + alpha is not a connection.
GaugeResult gauge_trivialize(const AInfinityStructure &a, const Cochain &alpha);

// True if gamma vanishes whenever the unit sits in one of the last p slots.
bool in_filtration(const Cochain &gamma, int p);

// (h^p gamma)^d(a_d..a_1) = (-1)^{||gamma|| + ||a_1|| + ... + ||a_p||} gamma^{d+1}(a_d, .., a_{p+1}, e, a_p, .., a_1),
// so that delta h^p + h^p delta is the identity on F^p / F^{p+1}.
// Throws std::invalid_argument unless the basis unit is a strict unit of a.
Cochain reduced_homotopy(const AInfinityStructure &a, int p, const Cochain &gamma);

// Throws std::invalid_argument describing the first failure of strict unitality.
void require_strict_unit(const AInfinityStructure &a);

} // namespace qseries

#endif
