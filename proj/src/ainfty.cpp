#include <qseries/ainfty.hpp>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>

namespace qseries
{

namespace
{

const char *const q_var = "q";

std::string tuple_text(const Tuple &t)
{
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i)
        s += (i ? "," : "") + std::to_string(t[i]);
    return s + ")";
}

int reduced_sum(const GradedBasis &b, Tuple::const_iterator first, Tuple::const_iterator last)
{
    int s = 0;
    for (auto it = first; it != last; ++it)
        s += b.reduced(*it);
    return s;
}

int sign_of(int exponent)
{
    return exponent % 2 == 0 ? 1 : -1;
}

void require_same_basis(const Cochain &a, const Cochain &b)
{
    if (a.basis() != b.basis())
        throw std::invalid_argument("cochains live on different bases");
}

Cochain derivative(const Cochain &c)
{
    Cochain r(c.basis(), c.degree(), c.arity_cap(), std::max(c.q_order() - 1, 0));
    for (const auto &[t, outs] : c.entries())
        for (const auto &[o, s] : outs)
            r.add(t, o, qseries::derivative(s));
    return r;
}

// Dense dim x dim matrices over Q[[q]]/q^N, indexed [output][input].
using SeriesMatrix = std::vector<std::vector<RSeries>>;

SeriesMatrix arity_one_matrix(const Cochain &f)
{
    const int n = f.basis()->dim();
    SeriesMatrix m(static_cast<std::size_t>(n), std::vector<RSeries>(static_cast<std::size_t>(n)));
    for (int o = 0; o < n; ++o)
        for (int i = 0; i < n; ++i)
            m[static_cast<std::size_t>(o)][static_cast<std::size_t>(i)] = f.get({i}, o);
    return m;
}

SeriesMatrix multiply(const SeriesMatrix &a, const SeriesMatrix &b, int order)
{
    const std::size_t n = a.size();
    SeriesMatrix c(n, std::vector<RSeries>(n, RSeries::zero(q_var, order)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero())
                continue;
            for (std::size_t j = 0; j < n; ++j)
                if (!b[k][j].is_zero())
                    c[i][j] = c[i][j] + a[i][k] * b[k][j];
        }
    return c;
}

// Inverse of the q^0 part by Gauss-Jordan, then the geometric series in the
// rest, which has positive q-valuation.
SeriesMatrix invert_matrix(const SeriesMatrix &m, int order)
{
    const std::size_t n = m.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = m[i][j].coeff_or_zero(0);
        a[i][n + i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && sgn(a[pivot][col]) == 0)
            ++pivot;
        if (pivot == n)
            throw std::domain_error("F^1 is not invertible at q = 0");
        std::swap(a[pivot], a[col]);
        const Rational inv = 1 / a[col][col];
        for (auto &x : a[col])
            x *= inv;
        for (std::size_t row = 0; row < n; ++row)
            if (row != col && sgn(a[row][col]) != 0) {
                const Rational factor = a[row][col];
                for (std::size_t k = 0; k < 2 * n; ++k)
                    a[row][k] -= factor * a[col][k];
            }
    }
    SeriesMatrix m0_inv(n, std::vector<RSeries>(n));
    SeriesMatrix step(n, std::vector<RSeries>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m0_inv[i][j] = RSeries::constant(q_var, a[i][n + j], order);
    SeriesMatrix rest(n, std::vector<RSeries>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            RSeries r = m[i][j].truncated(order);
            r.set_coeff(0, 0);
            rest[i][j] = -r;
        }
    // (M0 (1 + M0^-1 R))^-1 = sum_k (-M0^-1 R)^k M0^-1.
    step = multiply(m0_inv, rest, order);
    SeriesMatrix term = m0_inv;
    SeriesMatrix sum = m0_inv;
    for (int k = 1; k < order; ++k) {
        term = multiply(step, term, order);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                sum[i][j] = sum[i][j] + term[i][j];
    }
    return sum;
}

// Applies m to the outputs of x.
Cochain apply_output(const SeriesMatrix &m, const Cochain &x)
{
    Cochain r(x.basis(), x.degree(), x.arity_cap(), x.q_order());
    for (const auto &[t, outs] : x.entries())
        for (const auto &[o, s] : outs)
            for (std::size_t o2 = 0; o2 < m.size(); ++o2) {
                const RSeries &c = m[o2][static_cast<std::size_t>(o)];
                if (!c.is_zero())
                    r.add(t, static_cast<int>(o2), c * s);
            }
    return r;
}

Cochain without_arity_one(const Cochain &f)
{
    Cochain r(f.basis(), f.degree(), f.arity_cap(), f.q_order());
    for (const auto &[t, outs] : f.entries())
        if (t.size() != 1)
            for (const auto &[o, s] : outs)
                r.add(t, o, s);
    return r;
}

// Incremental sparse Gaussian elimination for systems M x = b that share M
// across many right-hand sides.
class SparseSolver
{
public:
    explicit SparseSolver(std::size_t columns) : m_columns(columns) {}

    void add_row(std::map<std::size_t, Rational> row)
    {
        const std::size_t id = m_rows++;
        std::map<std::size_t, Rational> combo{{id, Rational(1)}};
        for (const auto &p : m_pivots) {
            auto it = row.find(p.column);
            if (it == row.end())
                continue;
            const Rational factor = it->second;
            axpy(row, p.row, -factor);
            axpy(combo, p.combo, -factor);
        }
        if (row.empty()) {
            m_constraints.push_back(std::move(combo));
            return;
        }
        const std::size_t col = row.begin()->first;
        const Rational inv = 1 / row.begin()->second;
        for (auto &[c, v] : row)
            v *= inv;
        for (auto &[c, v] : combo)
            v *= inv;
        // Keep earlier pivot rows free of the new pivot column.
        for (auto &p : m_pivots) {
            auto it = p.row.find(col);
            if (it == p.row.end())
                continue;
            const Rational factor = it->second;
            axpy(p.row, row, -factor);
            axpy(p.combo, combo, -factor);
        }
        m_pivots.push_back({col, std::move(row), std::move(combo)});
    }

    // Index of the first violated consistency condition, or the solution with
    // free variables set to zero.
    std::variant<std::size_t, std::vector<Rational>> solve(const std::vector<Rational> &b) const
    {
        for (std::size_t k = 0; k < m_constraints.size(); ++k)
            if (sgn(dot(m_constraints[k], b)) != 0)
                return k;
        std::vector<Rational> x(m_columns, Rational(0));
        for (const auto &p : m_pivots)
            x[p.column] = dot(p.combo, b);
        return x;
    }

private:
    struct Pivot {
        std::size_t column;
        std::map<std::size_t, Rational> row;
        std::map<std::size_t, Rational> combo;
    };

    static void axpy(std::map<std::size_t, Rational> &y, const std::map<std::size_t, Rational> &x, const Rational &a)
    {
        for (const auto &[k, v] : x) {
            Rational &slot = y[k];
            slot += a * v;
            if (sgn(slot) == 0)
                y.erase(k);
        }
    }

    static Rational dot(const std::map<std::size_t, Rational> &w, const std::vector<Rational> &b)
    {
        Rational s = 0;
        for (const auto &[k, v] : w)
            s += v * b[k];
        return s;
    }

    std::size_t m_columns;
    std::size_t m_rows = 0;
    std::vector<Pivot> m_pivots;
    std::vector<std::map<std::size_t, Rational>> m_constraints;
};

// All (tuple, output) slots of a degree-s cochain with arity <= cap.
std::vector<std::pair<Tuple, int>> slots(const GradedBasis &b, int degree, int cap)
{
    std::vector<std::pair<Tuple, int>> out;
    Tuple t;
    std::function<void(int)> rec = [&](int remaining) {
        int deg_sum = 0;
        for (int x : t)
            deg_sum += b.degrees[static_cast<std::size_t>(x)];
        for (int o = 0; o < b.dim(); ++o)
            if (b.degrees[static_cast<std::size_t>(o)] == deg_sum + degree - static_cast<int>(t.size()))
                out.emplace_back(t, o);
        if (remaining == 0)
            return;
        for (int x = 0; x < b.dim(); ++x) {
            t.push_back(x);
            rec(remaining - 1);
            t.pop_back();
        }
    };
    rec(cap);
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &c) {
        return a.first.size() != c.first.size() ? a.first.size() < c.first.size() : a < c;
    });
    return out;
}

} // namespace

Cochain::Cochain(BasisPtr basis, int degree, int arity_cap, int q_order)
    : m_basis(std::move(basis)), m_degree(degree), m_arity_cap(arity_cap), m_q_order(q_order)
{
    if (!m_basis)
        throw std::invalid_argument("cochain needs a basis");
    if (arity_cap < 0)
        throw std::invalid_argument("arity cap must be nonnegative");
    if (q_order < 0)
        throw std::invalid_argument("q-order must be nonnegative");
}

RSeries Cochain::get(const Tuple &inputs, int output) const
{
    if (static_cast<int>(inputs.size()) > m_arity_cap)
        throw std::out_of_range("arity " + std::to_string(inputs.size()) + " is above the cap "
                                + std::to_string(m_arity_cap));
    auto it = m_entries.find(inputs);
    if (it != m_entries.end()) {
        auto jt = it->second.find(output);
        if (jt != it->second.end())
            return jt->second;
    }
    return RSeries::zero(q_var, m_q_order);
}

void Cochain::add(const Tuple &inputs, int output, const RSeries &c)
{
    const int d = static_cast<int>(inputs.size());
    if (d > m_arity_cap)
        return;
    if (output < 0 || output >= m_basis->dim())
        throw std::invalid_argument("output index out of range");
    int deg = m_degree - d;
    for (int x : inputs) {
        if (x < 0 || x >= m_basis->dim())
            throw std::invalid_argument("input index out of range in " + tuple_text(inputs));
        deg += m_basis->degrees[static_cast<std::size_t>(x)];
    }
    if (m_basis->degrees[static_cast<std::size_t>(output)] != deg) {
        if (c.truncated(m_q_order).is_zero())
            return;
        throw std::invalid_argument("entry " + tuple_text(inputs) + " -> " + std::to_string(output)
                                    + " does not have cochain degree " + std::to_string(m_degree));
    }
    if (c.valuation() < 0)
        throw std::invalid_argument("cochain coefficients must be power series in q");
    if (c.order() < m_q_order) {
        // Lose knowledge everywhere rather than mix truncation orders.
        *this = truncated(m_arity_cap, c.order());
    }
    const RSeries v = c.truncated(m_q_order).renamed(q_var);
    if (v.is_zero())
        return;
    auto &outs = m_entries[inputs];
    auto it = outs.find(output);
    if (it == outs.end()) {
        outs.emplace(output, v);
        return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) {
        outs.erase(it);
        if (outs.empty())
            m_entries.erase(inputs);
    }
}

void Cochain::add(const Tuple &inputs, int output, const Rational &c, int q_power)
{
    add(inputs, output, RSeries::monomial(q_var, q_power, c, m_q_order));
}

bool Cochain::has_arity(int d) const
{
    for (const auto &[t, outs] : m_entries)
        if (static_cast<int>(t.size()) == d)
            return true;
    return false;
}

int Cochain::max_arity() const
{
    int m = -1;
    for (const auto &[t, outs] : m_entries)
        m = std::max(m, static_cast<int>(t.size()));
    return m;
}

int Cochain::q_valuation() const
{
    int v = m_q_order;
    for (const auto &[t, outs] : m_entries)
        for (const auto &[o, s] : outs)
            v = std::min(v, s.valuation());
    return v;
}

Cochain Cochain::q_coefficient(int k, int q_order) const
{
    Cochain r(m_basis, m_degree, m_arity_cap, q_order);
    for (const auto &[t, outs] : m_entries)
        for (const auto &[o, s] : outs) {
            const Rational c = s.coeff(k);
            if (sgn(c) != 0)
                r.add(t, o, RSeries::constant(q_var, c, q_order));
        }
    return r;
}

Cochain Cochain::truncated(int arity_cap, int q_order) const
{
    Cochain r(m_basis, m_degree, std::min(arity_cap, m_arity_cap), std::min(q_order, m_q_order));
    for (const auto &[t, outs] : m_entries)
        for (const auto &[o, s] : outs)
            r.add(t, o, s);
    return r;
}

Cochain Cochain::arity_part(int d) const
{
    Cochain r(m_basis, m_degree, m_arity_cap, m_q_order);
    for (const auto &[t, outs] : m_entries)
        if (static_cast<int>(t.size()) == d)
            r.m_entries.emplace(t, outs);
    return r;
}

Cochain Cochain::below_arity(int d) const
{
    Cochain r(m_basis, m_degree, m_arity_cap, m_q_order);
    for (const auto &[t, outs] : m_entries)
        if (static_cast<int>(t.size()) < d)
            r.m_entries.emplace(t, outs);
    return r;
}

void Cochain::require_compatible(const Cochain &o) const
{
    require_same_basis(*this, o);
    if (m_degree != o.m_degree)
        throw std::invalid_argument("cochains have different degrees");
}

Cochain operator+(const Cochain &a, const Cochain &b)
{
    a.require_compatible(b);
    Cochain r(a.m_basis, a.m_degree, std::min(a.m_arity_cap, b.m_arity_cap), std::min(a.m_q_order, b.m_q_order));
    for (const auto *x : {&a, &b})
        for (const auto &[t, outs] : x->m_entries)
            for (const auto &[o, s] : outs)
                r.add(t, o, s);
    return r;
}

Cochain operator*(const Cochain &a, const RSeries &s)
{
    Cochain r(a.m_basis, a.m_degree, a.m_arity_cap, std::min(a.m_q_order, s.order()));
    for (const auto &[t, outs] : a.m_entries)
        for (const auto &[o, c] : outs)
            r.add(t, o, c * s);
    return r;
}

Cochain operator*(const Cochain &a, const Rational &s)
{
    Cochain r(a.m_basis, a.m_degree, a.m_arity_cap, a.m_q_order);
    for (const auto &[t, outs] : a.m_entries)
        for (const auto &[o, c] : outs)
            r.add(t, o, scale_rational(c, s));
    return r;
}

Cochain operator-(const Cochain &a, const Cochain &b)
{
    return a + b * Rational(-1);
}

bool equal_up_to_caps(const Cochain &a, const Cochain &b)
{
    a.require_compatible(b);
    const int cap = std::min(a.m_arity_cap, b.m_arity_cap);
    const int order = std::min(a.m_q_order, b.m_q_order);
    return (a.truncated(cap, order) - b.truncated(cap, order)).is_zero();
}

bool AInfinityStructure::is_deformation() const
{
    for (const auto &[t, outs] : mu.entries())
        if (t.empty())
            for (const auto &[o, s] : outs)
                if (sgn(s.coeff_or_zero(0)) != 0)
                    return false;
    return true;
}

AInfinityStructure algebra_from_products(BasisPtr basis,
                                         const std::map<std::pair<int, int>, std::map<int, Rational>> &products,
                                         int arity_cap, int q_order)
{
    Cochain mu(basis, 2, arity_cap, q_order);
    for (const auto &[in, outs] : products)
        for (const auto &[o, c] : outs)
            mu.add({in.first, in.second}, o, c * sign_of(basis->degrees.at(static_cast<std::size_t>(in.second))));
    return {mu};
}

Cochain circle(const Cochain &f, const Cochain &g)
{
    require_same_basis(f, g);
    const GradedBasis &b = *f.basis();
    const int cap = std::min(g.arity_cap(), g.has_arity(0) ? f.arity_cap() - 1 : f.arity_cap());
    Cochain r(f.basis(), f.degree() + g.degree() - 1, std::max(cap, 0), std::min(f.q_order(), g.q_order()));
    if (cap < 0)
        return r;
    std::vector<std::vector<std::pair<const Tuple *, const RSeries *>>> by_output(static_cast<std::size_t>(b.dim()));
    for (const auto &[t, outs] : g.entries())
        for (const auto &[o, s] : outs)
            by_output[static_cast<std::size_t>(o)].emplace_back(&t, &s);
    const int g_reduced = g.reduced_degree();
    for (const auto &[t, outs] : f.entries()) {
        const int k = static_cast<int>(t.size());
        for (int p = 0; p < k; ++p) {
            const auto &inner = by_output[static_cast<std::size_t>(t[static_cast<std::size_t>(p)])];
            if (inner.empty())
                continue;
            // Entries right of position p are a_i, ..., a_1.
            const int sign = sign_of(g_reduced * reduced_sum(b, t.begin() + p + 1, t.end()));
            for (const auto &[gt, gs] : inner) {
                if (k - 1 + static_cast<int>(gt->size()) > cap)
                    continue;
                Tuple nt(t.begin(), t.begin() + p);
                nt.insert(nt.end(), gt->begin(), gt->end());
                nt.insert(nt.end(), t.begin() + p + 1, t.end());
                for (const auto &[o, fs] : outs)
                    r.add(nt, o, scale_rational(fs * *gs, Rational(sign)));
            }
        }
    }
    return r;
}

Cochain compose(const Cochain &x, const AInfinityMorphism &f)
{
    require_same_basis(x, f.f);
    if (f.f.has_arity(0))
        throw std::invalid_argument("morphisms with a curvature component are not supported");
    const int cap = std::min(x.arity_cap(), f.f.arity_cap());
    Cochain r(x.basis(), x.degree(), cap, std::min(x.q_order(), f.f.q_order()));
    std::vector<std::vector<std::pair<const Tuple *, const RSeries *>>> by_output(
        static_cast<std::size_t>(x.basis()->dim()));
    for (const auto &[t, outs] : f.f.entries())
        for (const auto &[o, s] : outs)
            by_output[static_cast<std::size_t>(o)].emplace_back(&t, &s);
    for (const auto &[t, outs] : x.entries()) {
        const int k = static_cast<int>(t.size());
        Tuple acc;
        std::function<void(int, const RSeries &)> rec = [&](int slot, const RSeries &coeff) {
            if (slot == k) {
                for (const auto &[o, xs] : outs)
                    r.add(acc, o, xs * coeff);
                return;
            }
            for (const auto &[ft, fs] : by_output[static_cast<std::size_t>(t[static_cast<std::size_t>(slot)])]) {
                // Every remaining slot takes at least one input.
                if (static_cast<int>(acc.size() + ft->size()) + (k - slot - 1) > cap)
                    continue;
                const std::size_t before = acc.size();
                acc.insert(acc.end(), ft->begin(), ft->end());
                rec(slot + 1, coeff * *fs);
                acc.resize(before);
            }
        };
        rec(0, RSeries::one(q_var, r.q_order()));
    }
    return r;
}

std::vector<Residual> check_a_infinity(const AInfinityStructure &a, int d_max, int n_max)
{
    const Cochain rel = circle(a.mu, a.mu);
    if (d_max > rel.arity_cap())
        throw std::out_of_range("check_a_infinity: relations are only known through arity "
                                + std::to_string(rel.arity_cap()));
    if (n_max > rel.q_order())
        throw std::out_of_range("check_a_infinity: relations are only known through q-order "
                                + std::to_string(rel.q_order()));
    std::vector<Residual> out;
    const Cochain kept = rel.truncated(d_max, n_max);
    for (const auto &[t, outs] : kept.entries())
        for (const auto &[o, s] : outs)
            out.push_back({t, o, s});
    return out;
}

Cochain hochschild_differential(const AInfinityStructure &a, const Cochain &gamma)
{
    return circle(gamma, a.mu) * Rational(sign_of(gamma.reduced_degree())) - circle(a.mu, gamma);
}

Cochain kaledin_representative(const AInfinityStructure &a)
{
    return derivative(a.mu);
}

CoboundaryReport is_coboundary(const AInfinityStructure &a, const Cochain &c, int n)
{
    require_same_basis(a.mu, c);
    if (n > c.q_order() || n > a.mu.q_order())
        throw std::invalid_argument("is_coboundary: q-order exceeds the known data");
    const GradedBasis &b = *c.basis();
    const int beta_cap = c.arity_cap();
    const bool curved = a.mu.has_arity(0);
    const int eq_cap = std::min(curved ? beta_cap - 1 : beta_cap, a.mu.arity_cap());
    const int j_max = std::max(a.mu.max_arity(), 1);
    if (eq_cap < j_max)
        throw ArityCapError("is_coboundary: arity cap " + std::to_string(beta_cap)
                            + " is too small to impose a full equation (need at least "
                            + std::to_string(j_max + (curved ? 1 : 0)) + ")");

    const auto unknowns = slots(b, c.degree() - 1, beta_cap);
    const auto equations = slots(b, c.degree(), eq_cap);
    std::map<std::pair<Tuple, int>, std::size_t> row_of;
    for (std::size_t i = 0; i < equations.size(); ++i)
        row_of.emplace(equations[i], i);

    const AInfinityStructure mu0{a.mu.q_coefficient(0)};
    std::vector<std::map<std::size_t, Rational>> rows(equations.size());
    for (std::size_t col = 0; col < unknowns.size(); ++col) {
        Cochain e(c.basis(), c.degree() - 1, beta_cap, 1);
        e.add(unknowns[col].first, unknowns[col].second, Rational(1));
        const Cochain image = hochschild_differential(mu0, e);
        for (const auto &[t, outs] : image.entries())
            for (const auto &[o, s] : outs) {
                auto it = row_of.find({t, o});
                if (it != row_of.end())
                    rows[it->second][col] = s.coeff(0);
            }
    }
    SparseSolver solver(unknowns.size());
    for (auto &row : rows)
        solver.add_row(std::move(row));

    CoboundaryReport report;
    report.equation_arity = eq_cap;
    report.valid_arity = beta_cap - j_max + 1;
    std::vector<AInfinityStructure> mu_parts;
    for (int j = 0; j < n; ++j)
        mu_parts.push_back({a.mu.q_coefficient(j)});
    std::vector<Cochain> beta_parts;
    Cochain beta(c.basis(), c.degree() - 1, beta_cap, n);
    for (int k = 0; k < n; ++k) {
        Cochain rhs = c.q_coefficient(k);
        for (int j = 1; j <= k; ++j)
            if (!mu_parts[static_cast<std::size_t>(j)].mu.is_zero())
                rhs = rhs - hochschild_differential(mu_parts[static_cast<std::size_t>(j)],
                                                    beta_parts[static_cast<std::size_t>(k - j)]);
        std::vector<Rational> vec(equations.size(), Rational(0));
        for (const auto &[t, outs] : rhs.entries())
            for (const auto &[o, s] : outs) {
                auto it = row_of.find({t, o});
                if (it != row_of.end())
                    vec[it->second] = s.coeff(0);
            }
        const auto solved = solver.solve(vec);
        if (std::holds_alternative<std::size_t>(solved)) {
            report.obstructed_order = k;
            report.obstruction = rhs.truncated(eq_cap, 1);
            return report;
        }
        const auto &x = std::get<std::vector<Rational>>(solved);
        Cochain part(c.basis(), c.degree() - 1, beta_cap, 1);
        for (std::size_t col = 0; col < x.size(); ++col)
            if (sgn(x[col]) != 0)
                part.add(unknowns[col].first, unknowns[col].second, x[col]);
        for (const auto &[t, outs] : part.entries())
            for (const auto &[o, s] : outs)
                beta.add(t, o, RSeries::monomial(q_var, k, s.coeff(0), n));
        beta_parts.push_back(std::move(part));
    }
    report.beta = std::move(beta);
    return report;
}

AInfinityMorphism identity_morphism(BasisPtr basis, int arity_cap, int q_order)
{
    Cochain f(basis, 1, arity_cap, q_order);
    for (int i = 0; i < basis->dim(); ++i)
        f.add({i}, i, Rational(1));
    return {f};
}

AInfinityMorphism compose(const AInfinityMorphism &g, const AInfinityMorphism &f)
{
    return {compose(g.f, f)};
}

AInfinityMorphism inverse(const AInfinityMorphism &f)
{
    if (f.f.has_arity(0))
        throw std::invalid_argument("morphisms with a curvature component are not supported");
    const SeriesMatrix m_inv = invert_matrix(arity_one_matrix(f.f), f.f.q_order());
    const AInfinityMorphism rest{without_arity_one(f.f)};
    Cochain g(f.f.basis(), 1, f.f.arity_cap(), f.f.q_order());
    for (std::size_t o = 0; o < m_inv.size(); ++o)
        for (std::size_t i = 0; i < m_inv.size(); ++i)
            g.add({static_cast<int>(i)}, static_cast<int>(o), m_inv[o][i]);
    // (F o G)^d = F^1(G^d) + sum_{k >= 2} F^k(G, ..., G) must vanish for d >= 2.
    for (int d = 2; d <= f.f.arity_cap(); ++d) {
        const Cochain t = compose(rest.f, AInfinityMorphism{g}).arity_part(d);
        g = g - apply_output(m_inv, t);
    }
    return {g};
}

AInfinityMorphism exp_cocycle(const Cochain &c)
{
    if (c.degree() != 1)
        throw std::invalid_argument("exp_cocycle: cochain must have degree 1");
    if (c.has_arity(0))
        throw std::invalid_argument("exp_cocycle: arity-0 components are not supported");
    if (c.q_valuation() < 1)
        throw std::invalid_argument("exp_cocycle: cochain must vanish at q = 0");
    AInfinityMorphism id = identity_morphism(c.basis(), c.arity_cap(), c.q_order());
    Cochain sum = id.f;
    Cochain power = id.f;
    for (int n = 1; n < c.q_order() + 1; ++n) {
        power = circle(power, c) * make_rational(1, n);
        if (power.is_zero())
            break;
        sum = sum + power;
    }
    return {sum};
}

AInfinityStructure pullback(const AInfinityStructure &target, const AInfinityMorphism &f)
{
    require_same_basis(target.mu, f.f);
    const bool curved = target.mu.has_arity(0);
    const int cap = std::min(target.mu.arity_cap(), curved ? f.f.arity_cap() - 1 : f.f.arity_cap());
    if (cap < 0)
        throw std::invalid_argument("pullback: arity caps too small");
    const int order = std::min(target.mu.q_order(), f.f.q_order());
    const SeriesMatrix m_inv = invert_matrix(arity_one_matrix(f.f), order);
    const Cochain rest = without_arity_one(f.f);
    const Cochain lhs = compose(target.mu, f);
    Cochain mu(f.f.basis(), 2, cap, order);
    // F^1(mu'^d) = mu(F, .., F)^d - sum_{k >= 2} F^k(.., mu'^j, ..) with j < d.
    for (int d = 0; d <= cap; ++d) {
        const Cochain t = lhs.arity_part(d) - circle(rest, mu).arity_part(d);
        mu = mu + apply_output(m_inv, t);
    }
    return {mu};
}

AInfinityStructure pushforward(const AInfinityStructure &source, const AInfinityMorphism &f)
{
    return pullback(source, inverse(f));
}

Cochain morphism_residual(const AInfinityMorphism &f, const AInfinityStructure &source, const AInfinityStructure &target)
{
    return compose(target.mu, f) - circle(f.f, source.mu);
}

Cochain connection_residual(const AInfinityStructure &a, const Cochain &alpha)
{
    return hochschild_differential(a, alpha) + kaledin_representative(a);
}

Cochain transport_connection(const AInfinityMorphism &f, const Cochain &alpha)
{
    if (alpha.degree() != 1)
        throw std::invalid_argument("transport_connection: alpha must have degree 1");
    const Cochain t = circle(f.f, alpha) - derivative(f.f);
    return compose(t, inverse(f));
}

GaugeResult gauge_trivialize(const AInfinityStructure &a, const Cochain &alpha)
{
    if (!connection_residual(a, alpha).is_zero())
        throw std::invalid_argument("gauge_trivialize: d_q + alpha is not a connection");
    const int n = alpha.q_order();
    AInfinityStructure mu = a;
    Cochain al = alpha;
    AInfinityMorphism total = identity_morphism(a.basis(), alpha.arity_cap(), n + 1);
    int steps = 0;
    for (int m = al.q_valuation(); m < al.q_order(); m = al.q_valuation()) {
        // exp(q alpha_m / (m + 1)) removes the q^m term of alpha.
        const Cochain c = al.q_coefficient(m, n + 1) * RSeries::monomial(q_var, m + 1, make_rational(1, m + 1), n + 1);
        const AInfinityMorphism step = exp_cocycle(c);
        al = transport_connection(step, al);
        mu = pushforward(mu, step);
        total = compose(step, total);
        ++steps;
        if (al.q_valuation() <= m)
            throw std::logic_error("gauge_trivialize: q-order of alpha did not increase");
    }
    if (!kaledin_representative(mu).is_zero())
        throw std::logic_error("gauge_trivialize: transported structure is not q-constant");
    return {inverse(total), total, mu, al, steps};
}

bool in_filtration(const Cochain &gamma, int p)
{
    const auto unit = gamma.basis()->unit;
    if (!unit)
        throw std::invalid_argument("in_filtration: basis has no unit");
    for (const auto &[t, outs] : gamma.entries()) {
        const int d = static_cast<int>(t.size());
        for (int k = std::max(0, d - p); k < d; ++k)
            if (t[static_cast<std::size_t>(k)] == *unit)
                return false;
    }
    return true;
}

void require_strict_unit(const AInfinityStructure &a)
{
    const GradedBasis &b = *a.basis();
    if (!b.unit)
        throw std::invalid_argument("structure has no designated unit");
    const int e = *b.unit;
    if (a.mu.arity_cap() < 2)
        throw std::invalid_argument("strict unit check needs mu^2");
    for (const auto &[t, outs] : a.mu.entries())
        if (t.size() != 2 && std::find(t.begin(), t.end(), e) != t.end())
            throw std::invalid_argument("mu^" + std::to_string(t.size()) + " does not vanish on the unit");
    for (int x = 0; x < b.dim(); ++x)
        for (int o = 0; o < b.dim(); ++o) {
            const Rational want = x == o ? Rational(1) : Rational(0);
            const RSeries right = a.mu.get({x, e}, o);
            const RSeries left = a.mu.get({e, x}, o);
            if (right != RSeries::constant(q_var, want, right.order()))
                throw std::invalid_argument("mu^2(a, e) != a for basis element " + b.names[static_cast<std::size_t>(x)]);
            if (left != RSeries::constant(q_var, want * sign_of(b.degrees[static_cast<std::size_t>(x)]), left.order()))
                throw std::invalid_argument("mu^2(e, a) != (-1)^|a| a for basis element "
                                            + b.names[static_cast<std::size_t>(x)]);
        }
}

Cochain reduced_homotopy(const AInfinityStructure &a, int p, const Cochain &gamma)
{
    require_same_basis(a.mu, gamma);
    require_strict_unit(a);
    if (p < 0)
        throw std::invalid_argument("reduced_homotopy: p must be nonnegative");
    if (!in_filtration(gamma, p))
        throw std::invalid_argument("reduced_homotopy: gamma is not in F^p");
    const GradedBasis &b = *a.basis();
    const int e = *b.unit;
    Cochain r(gamma.basis(), gamma.degree() - 1, std::max(gamma.arity_cap() - 1, 0), gamma.q_order());
    for (const auto &[t, outs] : gamma.entries()) {
        const int d = static_cast<int>(t.size()) - 1;
        if (d < p)
            continue;
        const std::size_t pos = static_cast<std::size_t>(d - p);
        if (t[pos] != e)
            continue;
        Tuple nt(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(pos));
        nt.insert(nt.end(), t.begin() + static_cast<std::ptrdiff_t>(pos) + 1, t.end());
        // The unit has odd reduced degree; moving it past gamma costs (-1)^{||gamma||}.
        const int sign = sign_of(gamma.reduced_degree()
                                 + reduced_sum(b, t.begin() + static_cast<std::ptrdiff_t>(pos) + 1, t.end()));
        for (const auto &[o, s] : outs)
            r.add(nt, o, scale_rational(s, Rational(sign)));
    }
    return r;
}

} // namespace qseries
