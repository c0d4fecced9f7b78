#ifndef QSERIES_LEFSCHETZ_HPP
#define QSERIES_LEFSCHETZ_HPP

#include <map>
#include <utility>

#include <qseries/cohomology.hpp>
#include <qseries/series.hpp>

namespace qseries
{

// Truncated bivariate series sum c_{d1,d2} y1^d1 y2^d2 with cohomology
// coefficients, d1 <= d1_max and d2 <= d2_max.
class CohBiSeries
{
public:
    CohBiSeries(int d1_max, int d2_max, int hbar_cap);

    int d1_max() const { return m_d1; }
    int d2_max() const { return m_d2; }
    int hbar_cap() const { return m_cap; }

    const CohomologyElement &coeff(int d1, int d2) const;
    void add(int d1, int d2, const CohomologyElement &c);
    const std::map<std::pair<int, int>, CohomologyElement> &terms() const { return m_terms; }

    friend CohBiSeries operator*(const CohBiSeries &p, const CohBiSeries &q);

private:
    int m_d1;
    int m_d2;
    int m_cap;
    CohomologyElement m_zero;
    std::map<std::pair<int, int>, CohomologyElement> m_terms;
};

// exp of a series whose (0, 0) coefficient has no constant term.
CohBiSeries exp_nilpotent(const CohBiSeries &x);

// The twisted I-function of the quintic in P^1 x P^4:
// (x1 + 5 x2) sum (y1/hbar)^d1 y2^d2 prod_{i <= d1 + 5 d2} ((x1 + 5 x2)/hbar + i)
//   / (prod_{i <= d1} (x1/hbar + i)^2 prod_{i <= d2} (x2/hbar + i)^5).
// Requires 0 <= d1_max <= 2, d2_max >= 0, hbar_cap >= 0.
CohBiSeries i_function(int d1_max, int d2_max, int hbar_cap);

// Single summand of i_function.
CohomologyElement i_function_term(int d1, int d2, int hbar_cap);

struct GklSeries {
    RSeries g;          // in y2
    RSeries k_over_y1;  // k / y1, in y2
    RSeries l1;
    RSeries l2;
};

// (5d)! / (d!)^5 weighted closed forms for e^g, e^g k, e^g l1, e^g l2,
// divided out. All series known through y2^d2_max.
GklSeries gkl_series(int d2_max);

// The four products e^g, e^g k/y1, e^g l1, e^g l2 read off from the
// I-function coefficients instead of the closed forms.
struct GklProducts {
    RSeries eg;
    RSeries eg_k_over_y1;
    RSeries eg_l1;
    RSeries eg_l2;
};
GklProducts gkl_closed_products(int d2_max);
GklProducts gkl_products_from_i_function(int d2_max, int hbar_cap);

struct MirrorMap {
    RSeries y1_over_q1; // y1 / q1 as a series in q2
    RSeries y2;         // y2 as a series in q2
};

// Inverts q2 = y2 e^{l2(y2)} and sets y1 = q1 e^{-l1(y2(q2))}. Known through
// q2^d2_max.
MirrorMap mirror_map(int d2_max);

struct PencilSeriesData {
    RSeries psi;
    RSeries eta;
    RSeries z2;
};

// Reads psi, eta, z2 off the hbar^-2 part of e^{-g - (k + l1 x1 + l2 x2)/hbar} I
// after substituting the mirror map, with q1^d1 q2^d2 -> q^{5 d2 - d1}.
// Throws std::logic_error if the extracted coefficients do not have the
// expected shape.
PencilSeriesData extract_pencil_data(int d2_max, int hbar_cap = 6);

// g = 8 z2 psi^2 + h' + h^2/2 with h = eta - psi'/psi.
RSeries pencil_schwarzian_term(const PencilSeriesData &d);

struct QuinticSolution {
    RSeries f;            // Schwarzian route, (a1, a2) = (1, 0)
    RSeries f_ode;        // s1/s0 for h = eta - psi'/psi, k = 8 z2 psi^2
    RSeries f_mirror;     // y2(q^5)^{1/5}
};

// Solves S_q f + g = 0 for the quintic data and checks the ODE route and the
// mirror-map fifth root against it. Throws std::logic_error on disagreement.
QuinticSolution quintic_f(int d2_max, int hbar_cap = 6);

// Schwarzian and ODE routes for arbitrary pencil data (no mirror cross-check).
QuinticSolution solve_pencil(const PencilSeriesData &d);

// Smallest d2_max for which psi, eta, z2 and f are all known below q^order.
int quintic_d2_for_order(int order);

} // namespace qseries

#endif
