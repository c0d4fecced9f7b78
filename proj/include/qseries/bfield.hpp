#ifndef QSERIES_BFIELD_HPP
#define QSERIES_BFIELD_HPP

#include <vector>

#include <qseries/laurent_poly.hpp>
#include <qseries/novikov.hpp>
#include <qseries/schwarzian.hpp>
#include <qseries/series.hpp>

namespace qseries
{

// Series in q over Q[q_1^{+-1}, ..., q_r^{+-1}].
using BSeries = Series<LaurentPoly>;

// Class-valued series, components in the basis [dE], [M], D_1..D_r.
using ClassSeries = std::vector<BSeries>;

// B = b [dE] + b_1 D_1 + ... + b_r D_r with all series in q Q[q_j^{+-1}][[q]].
struct BField {
    BSeries b;
    std::vector<BSeries> b_j;

    static BField zero(int r, int order);
    int order() const;
    // B . A = b e(A) + sum_j b_j D_j(A).
    BSeries pairing(const LatticeSpec &lattice, const Point &a) const;
};

// The Laurent monomial q_1^{D_1 . A} ... q_r^{D_r . A}.
LaurentPoly d_monomial(const LatticeSpec &lattice, const Point &a);

// Phi_k(X) = X - (1/k)(X . A*)[dE] on class vectors.
ClassVec phi(const LatticeSpec &lattice, int k, const ClassVec &x);

// z_B = sum_A z_A q^{e(A)} q_1^{D_1.A} ... exp(B . A), known through order
// min(order(B) - 1, ...).
ClassSeries twisted_z1(const Derivation &z, const BField &b);

struct NormalizedBField {
    BField b;     // known through order cap + 1
    BSeries eta;  // known through order cap
};

// The psi_B = 1 solution of q^-1 [dE] + d_q B = z_B - eta_B [M], built one
// q-order at a time.
NormalizedBField b_field_normalize(const Derivation &z, int cap);

// (q^-1 [dE] + d_q B + eta_B [M]) - z_B, componentwise; zero when the
// normalization holds.
ClassSeries b_field_residual(const Derivation &z, const NormalizedBField &n);

// x(q, q_1, ..., q_r) evaluated at q = g, q_j = g_j. Every g_j needs
// constant term 1.
RSeries evaluate(const BSeries &x, const RSeries &g, const std::vector<RSeries> &g_j);

// The substitution q -> g, q_j -> g_j that turns Q exp(B) into q^{[dE]}.
struct ChangeOfVariables {
    RSeries g;
    std::vector<RSeries> g_j;
};
ChangeOfVariables change_of_variables(const BField &b);

// G_B: apply the substitution.
RSeries apply_substitution(const BSeries &x, const ChangeOfVariables &cv);

// K_B(q^A) = t^{m(A)} q^{e(A)} q_1^{D_1.A} ... exp(B . A), extended linearly.
Weighted<LaurentPoly> specialize_K_B(const NovikovElement &f, const BField &b);

// d_{B,t} x = t (x' + (i/2) eta_B x) for psi_B = 1 and x of degree i.
Weighted<LaurentPoly> twisted_derivative(const Weighted<LaurentPoly> &x, const BSeries &eta);

} // namespace qseries

#endif
