#include <qseries/bfield.hpp>

#include <map>
#include <stdexcept>

namespace qseries
{

namespace
{

const char *const q_var = "q";

// Same coefficients, truncation order raised to `order` with zeros.
BSeries extend(const BSeries &s, int order)
{
    if (order <= s.order())
        return s.truncated(order);
    return BSeries::from_terms(s.var(), order, s.terms());
}

void require_positive_order(const BSeries &s, const char *what)
{
    if (s.min_exp() < 0 || !s.coeff_or_zero(0).is_zero())
        throw std::invalid_argument(std::string(what) + ": B-field series must lie in q Q[q_j^{+-1}][[q]]");
}

} // namespace

BField BField::zero(int r, int order)
{
    return {BSeries::zero(q_var, order), std::vector<BSeries>(static_cast<std::size_t>(r), BSeries::zero(q_var, order))};
}

int BField::order() const
{
    int n = b.order();
    for (const auto &s : b_j)
        n = std::min(n, s.order());
    return n;
}

BSeries BField::pairing(const LatticeSpec &lattice, const Point &a) const
{
    if (b_j.size() != static_cast<std::size_t>(lattice.r()))
        throw std::invalid_argument("B-field has the wrong number of components");
    BSeries s = scale_rational(b, Rational(static_cast<long>(lattice.e_of(a))));
    for (int k = 0; k < lattice.r(); ++k)
        s = s + scale_rational(b_j[static_cast<std::size_t>(k)], Rational(static_cast<long>(lattice.d_of(k, a))));
    return s;
}

LaurentPoly d_monomial(const LatticeSpec &lattice, const Point &a)
{
    LaurentPoly::Exponent e;
    for (int k = 0; k < lattice.r(); ++k)
        e.push_back(static_cast<int>(lattice.d_of(k, a)));
    return LaurentPoly::monomial(e, 1);
}

ClassVec phi(const LatticeSpec &lattice, int k, const ClassVec &x)
{
    if (k == 0)
        throw std::invalid_argument("phi: k must be nonzero");
    ClassVec y = x;
    y[0] -= lattice.pairing(x, lattice.a_star()) / Rational(k);
    return y;
}

ClassSeries twisted_z1(const Derivation &z, const BField &b)
{
    const LatticeSpec &lat = *z.lattice();
    const int n = b.order();
    if (n < 1)
        throw std::invalid_argument("twisted_z1: B-field order must be positive");
    ClassSeries out(static_cast<std::size_t>(lat.rank()), BSeries::zero(q_var, n - 1));
    for (const auto &t : z.terms()) {
        const int level = static_cast<int>(lat.e_of(t.shift));
        const BSeries weight = shift(exp(b.pairing(lat, t.shift)), level) * d_monomial(lat, t.shift);
        for (std::size_t i = 0; i < out.size(); ++i)
            if (sgn(t.cls[i]) != 0)
                out[i] = out[i] + scale_rational(weight, t.cls[i]);
    }
    return out;
}

NormalizedBField b_field_normalize(const Derivation &z, int cap)
{
    if (cap < 1)
        throw std::invalid_argument("b_field_normalize: cap must be positive");
    const LatticeSpec &lat = *z.lattice();
    BField b = BField::zero(lat.r(), 1);
    BSeries eta = BSeries::zero(q_var, 0);
    for (int k = 1; k <= cap; ++k) {
        // With B_k still zero, the q^{k-1} term of z_B is everything except
        // -(B_k . A*)[dE]; solve k B_k + b_k [dE] + eta_{k-1} [M] = prev.
        b.b = extend(b.b, k + 1);
        for (auto &s : b.b_j)
            s = extend(s, k + 1);
        const ClassSeries zb = twisted_z1(z, b);
        eta = extend(eta, k);
        eta.set_coeff(k - 1, zb[1].coeff(k - 1));
        b.b.set_coeff(k, zb[0].coeff(k - 1) * make_rational(1, k + 1));
        for (int j = 0; j < lat.r(); ++j)
            b.b_j[static_cast<std::size_t>(j)].set_coeff(k, zb[static_cast<std::size_t>(j + 2)].coeff(k - 1)
                                                                * make_rational(1, k));
    }
    return {b, eta};
}

ClassSeries b_field_residual(const Derivation &z, const NormalizedBField &n)
{
    const LatticeSpec &lat = *z.lattice();
    const ClassSeries zb = twisted_z1(z, n.b);
    ClassSeries lhs(zb.size());
    lhs[0] = BSeries::monomial(q_var, -1, LaurentPoly(1), n.b.order()) + derivative(n.b.b);
    lhs[1] = n.eta;
    for (int j = 0; j < lat.r(); ++j)
        lhs[static_cast<std::size_t>(j + 2)] = derivative(n.b.b_j[static_cast<std::size_t>(j)]);
    ClassSeries residual(zb.size());
    for (std::size_t i = 0; i < zb.size(); ++i)
        residual[i] = lhs[i] - zb[i];
    return residual;
}

RSeries evaluate(const BSeries &x, const RSeries &g, const std::vector<RSeries> &g_j)
{
    if (g.valuation() < 1)
        throw std::invalid_argument("evaluate: g must vanish at q = 0");
    for (const auto &s : g_j)
        if (s.coeff(0) != 1)
            throw std::invalid_argument("evaluate: every g_j must have constant term 1");
    std::map<int, RSeries> g_pow;
    std::map<std::pair<std::size_t, int>, RSeries> gj_pow;
    auto power_g = [&](int n) -> const RSeries & {
        auto it = g_pow.find(n);
        if (it == g_pow.end())
            it = g_pow.emplace(n, pow(g, n)).first;
        return it->second;
    };
    auto power_gj = [&](std::size_t j, int n) -> const RSeries & {
        auto it = gj_pow.find({j, n});
        if (it == gj_pow.end())
            it = gj_pow.emplace(std::make_pair(j, n), pow(g_j.at(j), n)).first;
        return it->second;
    };
    RSeries result = RSeries::zero(g.var(), x.order() * g.valuation());
    for (const auto &[n, poly] : x.terms())
        for (const auto &[e, c] : poly.terms()) {
            if (e.size() > g_j.size())
                throw std::invalid_argument("evaluate: coefficient uses more variables than were substituted");
            RSeries term = scale_rational(power_g(n), c);
            for (std::size_t j = 0; j < e.size(); ++j)
                if (e[j] != 0)
                    term = term * power_gj(j, e[j]);
            result = result + term;
        }
    return result;
}

ChangeOfVariables change_of_variables(const BField &b)
{
    require_positive_order(b.b, "change_of_variables");
    for (const auto &s : b.b_j)
        require_positive_order(s, "change_of_variables");
    const int n = b.order();
    RSeries phi0 = RSeries::zero(q_var, n);
    std::vector<RSeries> phi_j(b.b_j.size(), RSeries::zero(q_var, n));
    auto substitution = [&] {
        ChangeOfVariables cv{shift(exp(phi0), 1), {}};
        for (const auto &p : phi_j)
            cv.g_j.push_back(exp(p));
        return cv;
    };
    // The q^m term of the right side only sees terms of phi below q^m, so
    // each pass fixes one more coefficient.
    for (int pass = 0; pass < n; ++pass) {
        const ChangeOfVariables cv = substitution();
        RSeries next = -evaluate(b.b, cv.g, cv.g_j);
        std::vector<RSeries> next_j;
        for (const auto &s : b.b_j)
            next_j.push_back(-evaluate(s, cv.g, cv.g_j));
        if (next == phi0 && next_j == phi_j)
            break;
        phi0 = std::move(next);
        phi_j = std::move(next_j);
    }
    return substitution();
}

RSeries apply_substitution(const BSeries &x, const ChangeOfVariables &cv)
{
    return evaluate(x, cv.g, cv.g_j);
}

Weighted<LaurentPoly> specialize_K_B(const NovikovElement &f, const BField &b)
{
    const LatticeSpec &lat = *f.lattice();
    BSeries s = BSeries::zero(q_var, f.cap() + 1);
    for (const auto &[a, c] : f.terms()) {
        const int level = static_cast<int>(lat.e_of(a));
        s = s + shift(exp(b.pairing(lat, a)), level) * (d_monomial(lat, a) * c);
    }
    return {f.degree() / 2, s};
}

Weighted<LaurentPoly> twisted_derivative(const Weighted<LaurentPoly> &x, const BSeries &eta)
{
    return {x.t_power + 1, derivative(x.series) + scale_rational(eta * x.series, Rational(x.t_power))};
}

} // namespace qseries
