#include <qseries/gw_pipeline.hpp>

#include <stdexcept>
#include <string>

#include <qseries/lefschetz.hpp>
#include <qseries/schwarzian.hpp>

namespace qseries
{

namespace
{

using nlohmann::json;

[[noreturn]] void malformed(const std::string &what)
{
    throw std::invalid_argument("GW data: " + what);
}

const json &field(const json &j, const char *key)
{
    if (!j.is_object() || !j.contains(key))
        malformed(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::vector<long long> int_vector(const json &j, std::size_t size, const char *what)
{
    if (!j.is_array() || j.size() != size)
        malformed(std::string(what) + " must be an integer array of length " + std::to_string(size));
    std::vector<long long> v;
    for (const auto &x : j) {
        if (!x.is_number_integer())
            malformed(std::string(what) + " must contain integers");
        v.push_back(x.get<long long>());
    }
    return v;
}

Rational rational(const json &j, const char *what)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (!j.is_string())
        malformed(std::string(what) + " must be a rational string \"p/q\" or an integer");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument &) {
        malformed(std::string(what) + " is not a rational: " + j.get<std::string>());
    }
}

bool rseries_is_one(const RSeries &s)
{
    return s == RSeries::one(s.var(), s.order());
}

void check(bool ok, const std::string &what)
{
    if (!ok)
        throw std::logic_error("pipeline cross-check failed: " + what);
}

} // namespace

NovikovElement GwData::z2_element(int cap) const
{
    NovikovElement x(lattice, 4, cap);
    for (const auto &[a, c] : z2)
        x.add_term(a, c);
    return x;
}

GwData gw_data_from_json(const json &j)
{
    if (!j.is_object())
        malformed("top level must be an object");
    const json &rank_j = field(j, "rank");
    if (!rank_j.is_number_integer() || rank_j.get<long long>() < 2)
        malformed("rank must be an integer >= 2");
    const auto n = static_cast<std::size_t>(rank_j.get<long long>());
    const std::size_t r = n - 2;

    Covector m = int_vector(field(j, "m"), n, "m");
    Covector e = int_vector(field(j, "e"), n, "e");
    Point a_star = int_vector(field(j, "A_star"), n, "A_star");
    std::vector<Point> a_basis;
    std::vector<Covector> d_basis;
    const json &ab = field(j, "A_basis");
    const json &db = field(j, "D_basis");
    if (!ab.is_array() || ab.size() != r || !db.is_array() || db.size() != r)
        malformed("A_basis and D_basis must each list rank - 2 vectors");
    for (const auto &v : ab)
        a_basis.push_back(int_vector(v, n, "A_basis entry"));
    for (const auto &v : db)
        d_basis.push_back(int_vector(v, n, "D_basis entry"));
    SupportBox box;
    if (j.contains("box")) {
        const json &b = j.at("box");
        if (!b.is_object() || !field(b, "base").is_number_integer() || !field(b, "slope").is_number_integer())
            malformed("box must be {\"base\": int, \"slope\": int}");
        box.base = b.at("base").get<long long>();
        box.slope = b.at("slope").get<long long>();
        if (box.base < 0 || box.slope < 0)
            malformed("box bounds must be nonnegative");
    }
    LatticePtr lattice = LatticeSpec::make(m, e, a_star, a_basis, d_basis, box);

    std::vector<DerivationTerm> terms;
    const json &z1 = field(j, "z1");
    if (!z1.is_array())
        malformed("z1 must be an array");
    for (const auto &t : z1) {
        const json &cls = field(t, "class");
        ClassVec c(n, Rational(0));
        c[0] = cls.contains("dE") ? rational(cls.at("dE"), "dE") : Rational(0);
        c[1] = cls.contains("M") ? rational(cls.at("M"), "M") : Rational(0);
        if (cls.contains("D")) {
            const json &d = cls.at("D");
            if (!d.is_array() || d.size() != r)
                malformed("class D must list rank - 2 rationals");
            for (std::size_t k = 0; k < r; ++k)
                c[k + 2] = rational(d[k], "D entry");
        }
        terms.push_back({int_vector(field(t, "A"), n, "z1 A"), c});
    }

    std::vector<std::pair<Point, Rational>> z2;
    const json &z2j = field(j, "z2");
    if (!z2j.is_array())
        malformed("z2 must be an array");
    for (const auto &t : z2j) {
        Point a = int_vector(field(t, "A"), n, "z2 A");
        if (lattice->m_of(a) != 2)
            malformed("z2 points must have m(A) = 2");
        if (lattice->e_of(a) < 0)
            malformed("z2 points must have e(A) >= 0");
        z2.emplace_back(std::move(a), rational(field(t, "coeff"), "z2 coeff"));
    }
    return GwData{lattice, Derivation(lattice, std::move(terms)), std::move(z2)};
}

GwData quintic_gw_data(int level_cap)
{
    if (level_cap < 0)
        throw std::invalid_argument("quintic_gw_data: level cap must be nonnegative");
    // psi^-1 through q^{cap+2}, psi^-1 eta and z2 through q^{cap+1}.
    int d2 = 1;
    while (5 * d2 + 3 < level_cap + 2)
        ++d2;
    const PencilSeriesData p = extract_pencil_data(d2);
    const RSeries psi_inv = invert(p.psi);
    const RSeries w = psi_inv * p.eta;

    LatticePtr lattice = LatticeSpec::make({1, 0}, {0, 1}, {1, -1}, {}, {});
    std::vector<DerivationTerm> terms;
    for (int k = 0; k <= level_cap + 2; ++k) {
        const Rational alpha = psi_inv.coeff(k);
        const Rational beta = k >= 1 ? w.coeff(k - 1) : Rational(0);
        if (sgn(alpha) != 0 || sgn(beta) != 0)
            terms.push_back({{1, k - 1}, {alpha, beta}});
    }
    std::vector<std::pair<Point, Rational>> z2;
    for (const auto &[k, c] : p.z2.truncated(level_cap + 2).terms())
        z2.push_back({{2, k}, c});
    return GwData{lattice, Derivation(lattice, std::move(terms)), std::move(z2)};
}

MainPipelineResult theorem_main_pipeline(const GwData &data, int cap)
{
    if (cap < 0)
        throw std::invalid_argument("theorem_main_pipeline: cap must be nonnegative");
    const LatticePtr &lat = data.lattice;
    const Derivation &z = data.z1;
    MainPipelineResult out;

    std::vector<NovikovElement> g_lambda;
    for (const Point &a : lat->a_basis()) {
        g_lambda.push_back(solve_flat(z, NovikovElement::monomial(lat, a, 1, cap), cap));
        out.g.push_back(specialize_K(g_lambda.back()).series);
    }
    const NovikovElement z2 = data.z2_element(cap);
    const NovikovElement f_lambda = solve_novikov_schwarzian(z, z2 * Rational(-8), 0);
    const TSeries f = specialize_K(f_lambda);
    check(f.t_power == 0, "K(f_Lambda) has nonzero t-power");
    out.f = f.series;

    // Twisted route: K_B, then the substitution G_B.
    out.b_field = b_field_normalize(z, f_lambda.cap() + 1);
    out.substitution = change_of_variables(out.b_field.b);
    const Weighted<LaurentPoly> f_b = specialize_K_B(f_lambda, out.b_field.b);
    out.f_via_b = apply_substitution(f_b.series, out.substitution);
    check(equal_up_to_shared_order(out.f, out.f_via_b) && out.f_via_b.order() >= out.f.order(),
          "G_B(K_B(f)) differs from K(f)");
    if (lat->dual_pairing()) {
        for (std::size_t k = 0; k < g_lambda.size(); ++k) {
            const LaurentPoly qk = LaurentPoly::variable(static_cast<int>(k) + 1);
            const BSeries kb = specialize_K_B(g_lambda[k], out.b_field.b).series;
            check(kb == BSeries::constant("q", qk, kb.order()), "K_B(g_Lambda," + std::to_string(k + 1) + ") != q_k");
            check(equal_up_to_shared_order(out.substitution.g_j[k], out.g[k]),
                  "G_B(q_k) differs from K(g_Lambda," + std::to_string(k + 1) + ")");
        }
    }
    const BSeries one_b = BSeries::one("q", f_b.series.order());
    const Weighted<LaurentPoly> s_b = weighted_schwarzian(f_b.series, one_b, out.b_field.eta, 0);
    const BSeries z2_b = specialize_K_B(z2, out.b_field.b).series;
    check((s_b.series + scale_rational(z2_b, Rational(8))).is_zero(), "S_{B,t} f_B + 8 z2_B != 0");

    out.span_condition = z.satisfies_span_condition();
    if (out.span_condition) {
        for (std::size_t k = 0; k < out.g.size(); ++k)
            check(rseries_is_one(out.g[k]), "g_" + std::to_string(k + 1) + " is not 1 under the span condition");
        out.pencil = pencil_from_derivation(z, out.f.order());
        const auto s = weighted_schwarzian(out.f, out.pencil->psi, out.pencil->eta, 0);
        const RSeries z2_q = specialize_K(z2).series;
        check((s.series + scale_rational(z2_q, Rational(8))).is_zero(), "S_{q,t} f + 8 z2 != 0");
    }
    return out;
}

} // namespace qseries
