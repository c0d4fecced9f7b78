#include <qseries/novikov.hpp>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace qseries
{

namespace
{

std::string point_text(const Point &a)
{
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (i ? ", " : "") + std::to_string(a[i]);
    return s + ")";
}

// Solves M x = rhs over Q for square M; empty if M is singular.
std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs)
{
    const std::size_t n = m.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && sgn(m[pivot][col]) == 0)
            ++pivot;
        if (pivot == n)
            return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || sgn(m[row][col]) == 0)
                continue;
            const Rational factor = m[row][col] / m[col][col];
            for (std::size_t k = col; k < n; ++k)
                m[row][k] -= factor * m[col][k];
            rhs[row] -= factor * rhs[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        rhs[i] /= m[i][i];
    return rhs;
}

void require_same_lattice(const NovikovElement &a, const NovikovElement &b)
{
    if (a.lattice() != b.lattice())
        throw std::invalid_argument("Novikov elements live on different lattices");
}

} // namespace

long long SupportBox::radius(int level) const
{
    return base + slope * std::abs(static_cast<long long>(level));
}

long long LatticeSpec::pair(const Covector &c, const Point &a)
{
    if (c.size() != a.size())
        throw std::invalid_argument("covector and point have different ranks");
    long long s = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        s += c[i] * a[i];
    return s;
}

std::shared_ptr<const LatticeSpec> LatticeSpec::make(Covector m, Covector e, Point a_star, std::vector<Point> a_basis,
                                                     std::vector<Covector> d_basis, SupportBox box, bool require_dual)
{
    auto spec = std::make_shared<LatticeSpec>();
    const std::size_t n = m.size();
    if (n < 2)
        throw std::invalid_argument("lattice rank must be at least 2");
    const std::size_t r = n - 2;
    if (e.size() != n || a_star.size() != n)
        throw std::invalid_argument("lattice data has inconsistent ranks");
    if (a_basis.size() != r || d_basis.size() != r)
        throw std::invalid_argument("expected " + std::to_string(r) + " basis classes and dual classes");
    for (const auto &v : a_basis)
        if (v.size() != n)
            throw std::invalid_argument("basis class has the wrong rank");
    for (const auto &v : d_basis)
        if (v.size() != n)
            throw std::invalid_argument("dual class has the wrong rank");
    if (pair(m, a_star) != 1 || pair(e, a_star) != -1)
        throw std::invalid_argument("A* must satisfy m(A*) = 1 and e(A*) = -1");
    for (const auto &d : d_basis)
        if (pair(d, a_star) != 0)
            throw std::invalid_argument("dual classes must vanish on A*");
    for (const auto &a : a_basis)
        if (pair(m, a) != 0 || pair(e, a) != 0)
            throw std::invalid_argument("basis classes must satisfy m = e = 0");

    // {e, m, D_1..D_r} must be a rational basis of the dual.
    std::vector<std::vector<Rational>> rows;
    auto to_row = [](const Covector &c) {
        std::vector<Rational> row;
        for (long long x : c)
            row.emplace_back(static_cast<long>(x));
        return row;
    };
    rows.push_back(to_row(e));
    rows.push_back(to_row(m));
    for (const auto &d : d_basis)
        rows.push_back(to_row(d));
    if (!solve_square(rows, std::vector<Rational>(n, Rational(0))))
        throw std::invalid_argument("e, m and the dual classes do not form a basis of the dual lattice");

    // A_1..A_r span ker m and ker e: over Q this holds iff the D-pairing matrix
    // D_k . A_j is invertible.
    if (r > 0) {
        std::vector<std::vector<Rational>> pairing(r, std::vector<Rational>(r));
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t j = 0; j < r; ++j)
                pairing[k][j] = Rational(static_cast<long>(pair(d_basis[k], a_basis[j])));
        if (!solve_square(pairing, std::vector<Rational>(r, Rational(0))))
            throw std::invalid_argument("basis classes do not span ker m and ker e");
    }
    bool dual = true;
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t j = 0; j < r; ++j)
            if (pair(d_basis[k], a_basis[j]) != (k == j ? 1 : 0))
                dual = false;
    if (require_dual && !dual)
        throw std::invalid_argument("dual classes are not dual to the basis classes");

    spec->m_m = std::move(m);
    spec->m_e = std::move(e);
    spec->m_a_star = std::move(a_star);
    spec->m_a_basis = std::move(a_basis);
    spec->m_d_basis = std::move(d_basis);
    spec->m_box = box;
    spec->m_dual = dual;
    return spec;
}

Rational LatticeSpec::pairing(const ClassVec &c, const Point &a) const
{
    if (c.size() != static_cast<std::size_t>(rank()))
        throw std::invalid_argument("class vector has the wrong length");
    Rational s = c[0] * Rational(static_cast<long>(e_of(a))) + c[1] * Rational(static_cast<long>(m_of(a)));
    for (int k = 0; k < r(); ++k)
        s += c[static_cast<std::size_t>(k + 2)] * Rational(static_cast<long>(d_of(k, a)));
    return s;
}

std::optional<Point> LatticeSpec::find_point(long long m, long long e, const std::vector<long long> &d) const
{
    if (d.size() != static_cast<std::size_t>(r()))
        throw std::invalid_argument("find_point: wrong number of D-pairings");
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    auto add_row = [&](const Covector &c, long long value) {
        std::vector<Rational> row;
        for (long long x : c)
            row.emplace_back(static_cast<long>(x));
        rows.push_back(std::move(row));
        rhs.emplace_back(static_cast<long>(value));
    };
    add_row(m_e, e);
    add_row(m_m, m);
    for (int k = 0; k < r(); ++k)
        add_row(m_d_basis[static_cast<std::size_t>(k)], d[static_cast<std::size_t>(k)]);
    const auto x = solve_square(rows, rhs);
    if (!x)
        return std::nullopt;
    Point p;
    for (const Rational &v : *x) {
        if (v.get_den() != 1)
            return std::nullopt;
        p.push_back(v.get_num().get_si());
    }
    return p;
}

bool LatticeSpec::in_box(const Point &a) const
{
    const long long rad = m_box.radius(static_cast<int>(e_of(a)));
    for (int k = 0; k < r(); ++k)
        if (std::llabs(d_of(k, a)) > rad)
            return false;
    return true;
}

Point add_points(const Point &a, const Point &b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("points have different ranks");
    Point c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] + b[i];
    return c;
}

Point scale_point(const Point &a, long long k)
{
    Point c(a);
    for (auto &x : c)
        x *= k;
    return c;
}

NovikovElement::NovikovElement(LatticePtr lattice, int degree, int cap)
    : m_lattice(std::move(lattice)), m_degree(degree), m_cap(cap)
{
    if (!m_lattice)
        throw std::invalid_argument("Novikov element needs a lattice");
    if (degree % 2 != 0)
        throw std::invalid_argument("odd degrees are not supported");
}

NovikovElement NovikovElement::monomial(LatticePtr lattice, const Point &a, const Rational &c, int cap)
{
    const int degree = static_cast<int>(2 * lattice->m_of(a));
    NovikovElement x(std::move(lattice), degree, cap);
    x.add_term(a, c);
    return x;
}

NovikovElement NovikovElement::one(LatticePtr lattice, int cap)
{
    const Point zero(static_cast<std::size_t>(lattice->rank()), 0);
    return monomial(std::move(lattice), zero, 1, cap);
}

Rational NovikovElement::coeff(const Point &a) const
{
    if (m_lattice->e_of(a) > m_cap)
        throw std::out_of_range("coefficient lies above the filtration cap");
    auto it = m_terms.find(a);
    return it == m_terms.end() ? Rational(0) : it->second;
}

void NovikovElement::add_term(const Point &a, const Rational &c)
{
    if (static_cast<long long>(a.size()) != m_lattice->rank())
        throw std::invalid_argument("point has the wrong rank");
    if (2 * m_lattice->m_of(a) != m_degree)
        throw std::invalid_argument("point " + point_text(a) + " does not have degree " + std::to_string(m_degree));
    const long long level = m_lattice->e_of(a);
    if (level > m_cap || sgn(c) == 0)
        return;
    if (!m_lattice->in_box(a))
        throw SupportOverflow(static_cast<int>(level), "support box overflow at filtration level "
                                                           + std::to_string(level) + " (point " + point_text(a)
                                                           + ")");
    Rational &slot = m_terms[a];
    slot += c;
    if (sgn(slot) == 0)
        m_terms.erase(a);
}

int NovikovElement::valuation() const
{
    int v = m_cap + 1;
    for (const auto &[a, c] : m_terms)
        v = std::min(v, static_cast<int>(m_lattice->e_of(a)));
    return v;
}

NovikovElement NovikovElement::level_part(int level) const
{
    NovikovElement r(m_lattice, m_degree, m_cap);
    for (const auto &[a, c] : m_terms)
        if (m_lattice->e_of(a) == level)
            r.m_terms.emplace(a, c);
    return r;
}

NovikovElement NovikovElement::truncated(int cap) const
{
    NovikovElement r(m_lattice, m_degree, std::min(cap, m_cap));
    for (const auto &[a, c] : m_terms)
        if (m_lattice->e_of(a) <= r.m_cap)
            r.m_terms.emplace(a, c);
    return r;
}

NovikovElement operator+(const NovikovElement &a, const NovikovElement &b)
{
    require_same_lattice(a, b);
    if (a.m_degree != b.m_degree)
        throw std::invalid_argument("cannot add Novikov elements of different degrees");
    NovikovElement r(a.m_lattice, a.m_degree, std::min(a.m_cap, b.m_cap));
    for (const auto &[p, c] : a.m_terms)
        r.add_term(p, c);
    for (const auto &[p, c] : b.m_terms)
        r.add_term(p, c);
    return r;
}

NovikovElement operator*(const NovikovElement &a, const Rational &s)
{
    NovikovElement r(a.m_lattice, a.m_degree, a.m_cap);
    for (const auto &[p, c] : a.m_terms)
        r.add_term(p, c * s);
    return r;
}

NovikovElement operator-(const NovikovElement &a, const NovikovElement &b)
{
    return a + b * Rational(-1);
}

NovikovElement operator*(const NovikovElement &a, const NovikovElement &b)
{
    require_same_lattice(a, b);
    // Unknown terms of a start above cap(a) and meet terms of b at level >= v(b).
    const int cap = std::min(a.m_cap + b.valuation(), b.m_cap + a.valuation());
    NovikovElement r(a.m_lattice, a.m_degree + b.m_degree, cap);
    for (const auto &[p, c] : a.m_terms)
        for (const auto &[q, d] : b.m_terms)
            r.add_term(add_points(p, q), c * d);
    return r;
}

bool equal_up_to_cap(const NovikovElement &a, const NovikovElement &b)
{
    require_same_lattice(a, b);
    if (a.m_degree != b.m_degree)
        return false;
    const int cap = std::min(a.m_cap, b.m_cap);
    return a.truncated(cap).m_terms == b.truncated(cap).m_terms;
}

NovikovElement invert(const NovikovElement &a)
{
    const int v = a.valuation();
    if (v > a.cap())
        throw std::domain_error("cannot invert a Novikov element with no known terms");
    const NovikovElement lead = a.level_part(v);
    if (lead.terms().size() != 1)
        throw std::domain_error("lowest filtration part is not a monomial, so the element is not invertible");
    const auto &[p, c] = *lead.terms().begin();
    const LatticePtr &lat = a.lattice();
    const int cap = a.cap() - 2 * v;
    const NovikovElement lead_inv = NovikovElement::monomial(lat, scale_point(p, -1), 1 / c, cap + v);
    // a = lead (1 + x) with x at levels >= 1.
    const NovikovElement x = lead_inv * (a - lead);
    NovikovElement sum = NovikovElement::one(lat, x.cap());
    NovikovElement power = sum;
    for (int n = 1; n <= x.cap(); ++n) {
        power = (power * x) * Rational(-1);
        if (power.is_zero())
            break;
        sum = sum + power;
    }
    return (lead_inv * sum).truncated(cap);
}

Derivation::Derivation(LatticePtr lattice, std::vector<DerivationTerm> terms) : m_lattice(std::move(lattice))
{
    std::map<Point, ClassVec> merged;
    const std::size_t n = static_cast<std::size_t>(m_lattice->rank());
    for (auto &t : terms) {
        if (t.shift.size() != n || t.cls.size() != n)
            throw std::invalid_argument("derivation term has the wrong rank");
        if (m_lattice->m_of(t.shift) != 1)
            throw std::invalid_argument("derivation terms must have m(A) = 1 (degree 2)");
        auto [it, inserted] = merged.try_emplace(t.shift, t.cls);
        if (!inserted)
            for (std::size_t i = 0; i < n; ++i)
                it->second[i] += t.cls[i];
    }
    ClassVec leading(n, Rational(0));
    leading[0] = 1;
    auto it = merged.find(m_lattice->a_star());
    if (it == merged.end() || it->second != leading)
        throw std::invalid_argument("the leading term [dE] q^{A*} must be present with coefficient 1");
    for (auto &[a, cls] : merged) {
        const long long level = m_lattice->e_of(a);
        if (level < 0 && a != m_lattice->a_star())
            throw std::invalid_argument("derivation terms other than the leading one must have e(A) >= 0");
        if (std::all_of(cls.begin(), cls.end(), [](const Rational &x) { return sgn(x) == 0; }))
            continue;
        m_terms.push_back({a, cls});
    }
}

NovikovElement Derivation::apply(const NovikovElement &f) const
{
    if (f.lattice() != m_lattice)
        throw std::invalid_argument("derivation and element live on different lattices");
    NovikovElement r(m_lattice, f.degree() + 2, f.cap() - 1);
    for (const auto &t : m_terms)
        for (const auto &[a, c] : f.terms()) {
            const Rational w = m_lattice->pairing(t.cls, a);
            if (sgn(w) != 0)
                r.add_term(add_points(t.shift, a), w * c);
        }
    return r;
}

bool Derivation::satisfies_span_condition() const
{
    for (const auto &t : m_terms)
        for (std::size_t i = 2; i < t.cls.size(); ++i)
            if (sgn(t.cls[i]) != 0)
                return false;
    return true;
}

NovikovElement solve_flat(const Derivation &z, const NovikovElement &f0, int cap)
{
    const LatticePtr &lat = z.lattice();
    for (const auto &[a, c] : f0.terms())
        if (lat->e_of(a) != 0)
            throw std::invalid_argument("solve_flat: f0 must be concentrated at filtration level 0");
    NovikovElement f(lat, f0.degree(), cap);
    for (const auto &[a, c] : f0.terms())
        f.add_term(a, c);
    const Point minus_a_star = scale_point(lat->a_star(), -1);
    for (int k = 1; k <= cap; ++k) {
        // d_z f at level k-1 is k q^{A*} f_k plus terms from lower levels.
        const NovikovElement residual = z.apply(f).level_part(k - 1);
        for (const auto &[a, c] : residual.terms())
            f.add_term(add_points(a, minus_a_star), -c / k);
    }
    return f;
}

NovikovElement novikov_schwarzian(const Derivation &z, const NovikovElement &f)
{
    if (f.valuation() < 1)
        throw std::domain_error("novikov_schwarzian: f must lie in Lambda_{>=1}");
    if (f.level_part(1).terms().size() != 1)
        throw std::domain_error("novikov_schwarzian: q^{A*} f is not invertible");
    const NovikovElement d1 = z.apply(f);
    const NovikovElement d2 = z.apply(d1);
    const NovikovElement d3 = z.apply(d2);
    const NovikovElement inv = invert(d1);
    const NovikovElement ratio = d2 * inv;
    return d3 * inv - ratio * ratio * make_rational(3, 2);
}

NovikovElement novikov_mobius(const NovikovElement &f, const NovikovElement &a, const NovikovElement &b)
{
    return f * invert(a + b * f);
}

NovikovElement solve_novikov_schwarzian(const Derivation &z, const NovikovElement &g, int degree)
{
    const LatticePtr &lat = z.lattice();
    if (degree % 2 != 0)
        throw std::invalid_argument("solve_novikov_schwarzian: odd degrees are not supported");
    if (g.degree() != 4)
        throw std::invalid_argument("solve_novikov_schwarzian: g must have degree 4");
    if (g.valuation() < 0)
        throw std::invalid_argument("solve_novikov_schwarzian: g must lie in Lambda_{>=0}");
    const int cap = g.cap() + 3;
    const Point minus_a_star = scale_point(lat->a_star(), -1);
    const Point minus_3a_star = scale_point(lat->a_star(), -3);
    NovikovElement f = NovikovElement::monomial(lat, minus_a_star, 1, cap);
    // S(f + h) = S(f) + d^3 h + higher levels for h in Lambda_{>=k}, and the
    // leading part of d^3 h is k(k-1)(k-2) q^{3A*} h.
    for (int k = 3; k <= cap; ++k) {
        const NovikovElement residual = (g - novikov_schwarzian(z, f)).level_part(k - 3);
        const Rational scale = make_rational(1, static_cast<long>(k) * (k - 1) * (k - 2));
        for (const auto &[a, c] : residual.terms())
            f.add_term(add_points(a, minus_3a_star), c * scale);
    }
    if (degree == -2)
        return f;
    const std::vector<long long> zero_d(static_cast<std::size_t>(lat->r()), 0);
    const auto b = lat->find_point(-(degree + 2) / 2, 0, zero_d);
    if (!b)
        throw std::invalid_argument("no lattice point realizes the degree change to " + std::to_string(degree));
    const NovikovElement a = solve_flat(z, NovikovElement::monomial(lat, *b, 1, cap), cap);
    return f * invert(a);
}

TSeries specialize_K(const NovikovElement &f)
{
    const LatticePtr &lat = f.lattice();
    std::map<int, Rational> terms;
    for (const auto &[a, c] : f.terms())
        terms[static_cast<int>(lat->e_of(a))] += c;
    return {f.degree() / 2, RSeries::from_terms("q", f.cap() + 1, terms)};
}

std::optional<PencilFromLattice> pencil_from_derivation(const Derivation &z, int order)
{
    if (!z.satisfies_span_condition())
        return std::nullopt;
    const LatticePtr &lat = z.lattice();
    std::map<int, Rational> alpha;
    std::map<int, Rational> beta;
    for (const auto &t : z.terms()) {
        const int e = static_cast<int>(lat->e_of(t.shift));
        alpha[e + 1] += t.cls[0];
        beta[e] += t.cls[1];
    }
    const RSeries psi = invert(RSeries::from_terms("q", order, alpha));
    const RSeries eta = psi * RSeries::from_terms("q", order, beta);
    return PencilFromLattice{psi, eta.truncated(order)};
}

} // namespace qseries
