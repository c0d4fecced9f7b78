#include <qseries/lefschetz.hpp>

#include <set>
#include <stdexcept>
#include <vector>

#include <qseries/schwarzian.hpp>

namespace qseries
{

CohBiSeries::CohBiSeries(int d1_max, int d2_max, int hbar_cap)
    : m_d1(d1_max), m_d2(d2_max), m_cap(hbar_cap), m_zero(hbar_cap)
{
    if (d1_max < 0 || d2_max < 0)
        throw std::invalid_argument("bivariate caps must be nonnegative");
}

const CohomologyElement &CohBiSeries::coeff(int d1, int d2) const
{
    if (d1 > m_d1 || d2 > m_d2)
        throw std::out_of_range("bivariate coefficient beyond the truncation caps");
    auto it = m_terms.find({d1, d2});
    return it == m_terms.end() ? m_zero : it->second;
}

void CohBiSeries::add(int d1, int d2, const CohomologyElement &c)
{
    if (d1 < 0 || d2 < 0)
        throw std::invalid_argument("negative exponent in bivariate series");
    if (d1 > m_d1 || d2 > m_d2 || c.is_zero())
        return;
    auto [it, inserted] = m_terms.try_emplace({d1, d2}, m_cap);
    it->second = it->second + c;
    if (it->second.is_zero())
        m_terms.erase(it);
}

CohBiSeries operator*(const CohBiSeries &p, const CohBiSeries &q)
{
    CohBiSeries r(std::min(p.m_d1, q.m_d1), std::min(p.m_d2, q.m_d2), std::min(p.m_cap, q.m_cap));
    for (const auto &[i, u] : p.m_terms)
        for (const auto &[j, v] : q.m_terms)
            r.add(i.first + j.first, i.second + j.second, u * v);
    return r;
}

CohBiSeries exp_nilpotent(const CohBiSeries &x)
{
    if (sgn(x.coeff(0, 0).coeff({0, 0, 0})) != 0)
        throw std::domain_error("exp_nilpotent: constant term must vanish");
    const int bound = x.d1_max() + x.d2_max() + CohomologyElement::x1_nil + CohomologyElement::x2_nil + x.hbar_cap();
    CohBiSeries sum(x.d1_max(), x.d2_max(), x.hbar_cap());
    sum.add(0, 0, CohomologyElement::constant(1, x.hbar_cap()));
    CohBiSeries term = sum;
    for (int n = 1; n <= bound && !term.terms().empty(); ++n) {
        CohBiSeries next = term * x;
        term = CohBiSeries(x.d1_max(), x.d2_max(), x.hbar_cap());
        for (const auto &[d, c] : next.terms())
            term.add(d.first, d.second, c * make_rational(1, n));
        for (const auto &[d, c] : term.terms())
            sum.add(d.first, d.second, c);
    }
    return sum;
}

CohomologyElement i_function_term(int d1, int d2, int hbar_cap)
{
    const CohomologyElement y = CohomologyElement::monomial({1, 0, 0}, 1, hbar_cap)
                                + CohomologyElement::monomial({0, 1, 0}, 5, hbar_cap);
    const CohomologyElement x1w = CohomologyElement::monomial({1, 0, 1}, 1, hbar_cap);
    const CohomologyElement x2w = CohomologyElement::monomial({0, 1, 1}, 1, hbar_cap);
    const CohomologyElement yw = x1w + x2w * Rational(5);

    CohomologyElement r = y * CohomologyElement::monomial({0, 0, d1}, 1, hbar_cap);
    for (int i = 1; i <= d1 + 5 * d2; ++i)
        r = r * (yw + CohomologyElement::constant(i, hbar_cap));
    for (int i = 1; i <= d1; ++i) {
        const CohomologyElement inv = inverse_shifted(i, x1w);
        r = r * inv * inv;
    }
    for (int i = 1; i <= d2; ++i) {
        const CohomologyElement inv = inverse_shifted(i, x2w);
        const CohomologyElement inv2 = inv * inv;
        r = r * inv2 * inv2 * inv;
    }
    return r;
}

CohBiSeries i_function(int d1_max, int d2_max, int hbar_cap)
{
    if (d1_max < 0 || d1_max > 2)
        throw std::invalid_argument("i_function: d1_max must lie in 0..2");
    CohBiSeries s(d1_max, d2_max, hbar_cap);
    for (int d1 = 0; d1 <= d1_max; ++d1)
        for (int d2 = 0; d2 <= d2_max; ++d2)
            s.add(d1, d2, i_function_term(d1, d2, hbar_cap));
    return s;
}

namespace
{

Rational harmonic(int n)
{
    Rational h = 0;
    for (int i = 1; i <= n; ++i)
        h += make_rational(1, i);
    return h;
}

// (5d)! / (d!)^5
Rational quintic_weight(int d)
{
    Integer num;
    Integer den;
    mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(5 * d));
    mpz_fac_ui(den.get_mpz_t(), static_cast<unsigned long>(d));
    Integer den5;
    mpz_pow_ui(den5.get_mpz_t(), den.get_mpz_t(), 5);
    Rational r(num, den5);
    r.canonicalize();
    return r;
}

RSeries from_coeffs(const char *var, const std::vector<Rational> &c)
{
    return RSeries(var, 0, static_cast<int>(c.size()), c);
}

void require_d2(int d2_max)
{
    if (d2_max < 1)
        throw std::invalid_argument("d2_max must be at least 1");
}

} // namespace

GklProducts gkl_closed_products(int d2_max)
{
    require_d2(d2_max);
    std::vector<Rational> eg, ek, el1, el2;
    for (int d = 0; d <= d2_max; ++d) {
        const Rational c = quintic_weight(d);
        eg.push_back(c);
        ek.push_back(c * (5 * d + 1));
        el1.push_back(c * harmonic(5 * d));
        el2.push_back(c * 5 * (harmonic(5 * d) - harmonic(d)));
    }
    return {from_coeffs("y2", eg), from_coeffs("y2", ek), from_coeffs("y2", el1), from_coeffs("y2", el2)};
}

GklProducts gkl_products_from_i_function(int d2_max, int hbar_cap)
{
    require_d2(d2_max);
    if (hbar_cap < 1)
        throw std::invalid_argument("gkl_products_from_i_function: hbar_cap must be at least 1");
    std::vector<Rational> eg, ek, el1, el2;
    for (int d = 0; d <= d2_max; ++d) {
        const CohomologyElement i0 = i_function_term(0, d, hbar_cap);
        const CohomologyElement i1 = i_function_term(1, d, hbar_cap);
        eg.push_back(i0.coeff({1, 0, 0}));
        ek.push_back(i1.coeff({1, 0, 1}));
        const Rational l2 = i0.coeff({0, 2, 1}) / 5;
        el2.push_back(l2);
        el1.push_back((i0.coeff({1, 1, 1}) - l2) / 5);
    }
    return {from_coeffs("y2", eg), from_coeffs("y2", ek), from_coeffs("y2", el1), from_coeffs("y2", el2)};
}

GklSeries gkl_series(int d2_max)
{
    const GklProducts p = gkl_closed_products(d2_max);
    const RSeries inv = invert(p.eg);
    return {log(p.eg), p.eg_k_over_y1 * inv, p.eg_l1 * inv, p.eg_l2 * inv};
}

MirrorMap mirror_map(int d2_max)
{
    const GklSeries s = gkl_series(d2_max);
    const RSeries q2_of_y2 = shift(exp(s.l2), 1);
    const RSeries y2 = revert(q2_of_y2).renamed("q2");
    const RSeries y1_over_q1 = exp(-compose(s.l1.renamed("q2"), y2));
    return {y1_over_q1, y2};
}

PencilSeriesData extract_pencil_data(int d2_max, int hbar_cap)
{
    require_d2(d2_max);
    if (hbar_cap < 2)
        throw std::invalid_argument("extract_pencil_data: hbar_cap must be at least 2");
    const GklSeries s = gkl_series(d2_max);
    const MirrorMap mm = mirror_map(d2_max);

    CohBiSeries exponent(2, d2_max, hbar_cap);
    for (int j = 0; j <= d2_max; ++j) {
        CohomologyElement e = CohomologyElement::constant(-s.g.coeff(j), hbar_cap);
        e = e + CohomologyElement::monomial({1, 0, 1}, -s.l1.coeff(j), hbar_cap);
        e = e + CohomologyElement::monomial({0, 1, 1}, -s.l2.coeff(j), hbar_cap);
        exponent.add(0, j, e);
        exponent.add(1, j, CohomologyElement::monomial({0, 0, 1}, -s.k_over_y1.coeff(j), hbar_cap));
    }
    const CohBiSeries j_fn = exp_nilpotent(exponent) * i_function(2, d2_max, hbar_cap);

    // hbar^-2 part of the y1^d1 column, as q2-series per cohomology monomial,
    // after y1 = q1 u(q2), y2 = y2(q2).
    auto column = [&](int d1) {
        std::map<CohMonomial, RSeries> out;
        std::set<CohMonomial> monomials;
        for (int j = 0; j <= d2_max; ++j)
            for (const auto &[m, c] : j_fn.coeff(d1, j).terms())
                if (m.c == 2)
                    monomials.insert(m);
        const RSeries u_pow = pow(mm.y1_over_q1, d1);
        for (const CohMonomial &m : monomials) {
            std::vector<Rational> c;
            for (int j = 0; j <= d2_max; ++j)
                c.push_back(j_fn.coeff(d1, j).coeff(m));
            out.emplace(m, compose(from_coeffs("q2", c), mm.y2) * u_pow);
        }
        return out;
    };

    // q1^d1 q2^j -> q^{5j - d1}
    auto collapse = [&](const RSeries &col, int d1, const Rational &factor) {
        const int order = 5 * col.order() - d1;
        RSeries r("q", -d1, order, {});
        for (const auto &[j, c] : col.terms())
            r.set_coeff(5 * j - d1, c * factor);
        return r;
    };
    auto get = [](const std::map<CohMonomial, RSeries> &col, CohMonomial m, int order) {
        auto it = col.find(m);
        return it == col.end() ? RSeries::zero("q2", order) : it->second;
    };

    const int n2 = d2_max + 1;
    const auto one = column(1);
    for (const auto &[m, ser] : one)
        if (!(m == CohMonomial{0, 2, 2} || m == CohMonomial{1, 1, 2}))
            throw std::logic_error("extract_pencil_data: unexpected monomial in the degree-1 part");
    const RSeries psi_inv = shift(collapse(get(one, {0, 2, 2}, n2), 1, make_rational(1, 25)), 1);
    const RSeries psi_inv_eta = collapse(get(one, {1, 1, 2}, n2), 1, make_rational(1, 5));
    if (psi_inv.coeff(0) != 1)
        throw std::logic_error("extract_pencil_data: psi(0) != 1");
    if (psi_inv_eta.coeff(-1) != 0)
        throw std::logic_error("extract_pencil_data: eta has a pole");
    const RSeries psi = invert(psi_inv);
    const RSeries eta = psi * psi_inv_eta;

    const auto two = column(2);
    for (const auto &[m, ser] : two)
        if (!(m == CohMonomial{1, 0, 2} || m == CohMonomial{0, 1, 2}))
            throw std::logic_error("extract_pencil_data: unexpected monomial in the degree-2 part");
    const RSeries zx1 = get(two, {1, 0, 2}, n2);
    const RSeries zx2 = get(two, {0, 1, 2}, n2);
    if (!(scale_rational(zx1, Rational(5)) == zx2))
        throw std::logic_error("extract_pencil_data: degree-2 part is not a multiple of x1 + 5 x2");
    const RSeries z2 = collapse(zx1, 2, Rational(1));
    if (z2.coeff(-2) != 0 || z2.coeff(-1) != 0)
        throw std::logic_error("extract_pencil_data: z2 has a pole");

    return {psi, eta.truncated(eta.order()), z2};
}

RSeries pencil_schwarzian_term(const PencilSeriesData &d)
{
    const RSeries h = d.eta - derivative(d.psi) * invert(d.psi);
    const RSeries k = scale_rational(d.z2 * d.psi * d.psi, Rational(8));
    return ode_reduce(h, k);
}

namespace
{

// Drops stored zero coefficients below 0 so power-series preconditions see a
// clean min exponent.
RSeries as_power_series(const RSeries &s)
{
    RSeries r = RSeries::zero(s.var(), s.order());
    for (const auto &[e, c] : s.terms()) {
        if (e < 0)
            throw std::logic_error("expected a power series");
        r.set_coeff(e, c);
    }
    return r;
}

} // namespace

QuinticSolution solve_pencil(const PencilSeriesData &d)
{
    const RSeries g = as_power_series(pencil_schwarzian_term(d));
    const RSeries f = solve_schwarzian(g, Rational(1), Rational(0));
    const RSeries h = as_power_series(d.eta - derivative(d.psi) * invert(d.psi));
    const RSeries k = as_power_series(scale_rational(d.z2 * d.psi * d.psi, Rational(8)));
    const auto [s0, s1] = solve_ode2(h, k);
    const RSeries f_ode = s1 * invert(s0);
    if (!equal_up_to_shared_order(f, f_ode))
        throw std::logic_error("quintic: Schwarzian and ODE routes disagree at q^"
                               + std::to_string(*first_difference(f, f_ode)));
    return {f, f_ode, RSeries::zero("q", 0)};
}

QuinticSolution quintic_f(int d2_max, int hbar_cap)
{
    QuinticSolution sol = solve_pencil(extract_pencil_data(d2_max, hbar_cap));
    const RSeries y2 = mirror_map(d2_max).y2.renamed("q");
    sol.f_mirror = nth_root(substitute_power(y2, 5), 5);
    if (!equal_up_to_shared_order(sol.f, sol.f_mirror))
        throw std::logic_error("quintic: f disagrees with y2(q^5)^(1/5) at q^"
                               + std::to_string(*first_difference(sol.f, sol.f_mirror)));
    return sol;
}

int quintic_d2_for_order(int order)
{
    // z2 is the shortest output, known below q^{5 d2 + 3}.
    return std::max(1, (order - 3 + 4) / 5);
}

} // namespace qseries
