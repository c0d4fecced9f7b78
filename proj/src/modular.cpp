#include <qseries/modular.hpp>

#include <stdexcept>
#include <vector>

#include <qseries/schwarzian.hpp>

namespace qseries
{

namespace
{

// Extra working precision absorbing the order loss of divisions by q and of
// the third derivative in the Schwarzian.
constexpr int margin = 4;

RSeries require_order(const RSeries &s, int order, const char *what)
{
    if (s.order() < order)
        throw std::logic_error(std::string(what) + ": working precision fell short of the requested order");
    return s.truncated(order);
}

Integer divisor_power_sum(int n, unsigned k)
{
    Integer total = 0;
    for (int d = 1; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), k);
        total += p;
        const int other = n / d;
        if (other != d) {
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(other), k);
            total += p;
        }
    }
    return total;
}

RSeries q_gen(int order)
{
    return RSeries::gen("q", order);
}

} // namespace

std::string to_string(ModularKind kind)
{
    switch (kind) {
    case ModularKind::eisenstein_2:
        return "eisenstein-2";
    case ModularKind::eisenstein_4:
        return "eisenstein-4";
    case ModularKind::eta_quotient:
        return "eta-quotient";
    case ModularKind::assembled:
        return "assembled";
    }
    return "assembled";
}

ModularExpansion eisenstein(int weight, int order)
{
    if (order < 1)
        throw std::invalid_argument("eisenstein: order must be at least 1");
    long factor = 0;
    unsigned k = 0;
    ModularKind kind{};
    if (weight == 2) {
        factor = -24;
        k = 1;
        kind = ModularKind::eisenstein_2;
    } else if (weight == 4) {
        factor = 240;
        k = 3;
        kind = ModularKind::eisenstein_4;
    } else {
        throw std::invalid_argument("eisenstein: unsupported weight " + std::to_string(weight));
    }
    std::vector<Rational> c(static_cast<std::size_t>(order));
    c[0] = 1;
    for (int n = 1; n < order; ++n)
        c[static_cast<std::size_t>(n)] = Rational(divisor_power_sum(n, k) * factor);
    return {RSeries("q", 0, order, std::move(c)), kind};
}

RSeries euler_product(int order)
{
    std::vector<Rational> c(static_cast<std::size_t>(std::max(order, 0)));
    if (order > 0)
        c[0] = 1;
    for (int n = 1; n < order; ++n)
        for (int e = order - 1; e >= n; --e)
            c[static_cast<std::size_t>(e)] -= c[static_cast<std::size_t>(e - n)];
    return RSeries("q", 0, order, std::move(c));
}

RSeries verify_ramanujan(int order)
{
    const int n = order + 1;
    const RSeries e2 = eisenstein(2, n).series;
    const RSeries e4 = eisenstein(4, n).series;
    const RSeries lhs = scale_rational(q_gen(n) * derivative(e2), Rational(12));
    return require_order(lhs - e2 * e2 + e4, order, "verify_ramanujan");
}

ModularExpansion eta_quotient_u(int order)
{
    const int n = order + 1;
    const RSeries p = euler_product(n);
    const RSeries p9 = substitute_power(euler_product((n + 8) / 9), 9).truncated(n);
    const RSeries ratio = p * invert(p9);
    const RSeries u = shift(ratio * ratio * ratio, -1);
    return {require_order(u, order - 1, "eta_quotient_u"), ModularKind::eta_quotient};
}

ModularExpansion eta_quotient_hauptmodul(int order)
{
    if (order < 2)
        throw std::invalid_argument("eta_quotient_hauptmodul: order must be at least 2");
    // u is known through order - 1 with valuation -1, so 1/(u + 3) reaches order.
    const RSeries u = eta_quotient_u(order).series;
    const RSeries f = invert(add_constant(u, Rational(3)));
    return {require_order(f, order, "eta_quotient_hauptmodul"), ModularKind::eta_quotient};
}

CubicPencilData cubic_pencil_data(int order)
{
    if (order < 4)
        throw std::invalid_argument("cubic_pencil_data: order must be at least 4");
    const int n = order + margin;
    const RSeries e2 = eisenstein(2, n / 3 + 2).series;
    const RSeries e2_3 = substitute_power(e2, 3).truncated(n + 1);
    const RSeries e2_9 = substitute_power(e2, 9).truncated(n + 1);
    const RSeries psi_ratio = scale_rational(shift(add_constant(e2_3, Rational(-1)), -1), make_rational(1, 2));
    const RSeries eta = -psi_ratio;
    const RSeries alpha = scale_rational(shift(e2_3 - scale_rational(e2_9, Rational(9)), -1), make_rational(1, 8));
    const RSeries four_z2_psi2 = alpha * alpha - derivative(alpha) + scale_rational(alpha * psi_ratio, Rational(2));
    return {require_order(psi_ratio, order, "cubic_pencil_data"), require_order(eta, order, "cubic_pencil_data"),
            require_order(alpha, order, "cubic_pencil_data"), require_order(four_z2_psi2, order, "cubic_pencil_data")};
}

RSeries cubic_schwarzian_target(int order)
{
    const RSeries e4 = eisenstein(4, order / 3 + 2).series;
    const RSeries e4_3 = substitute_power(e4, 3).truncated(order + 2);
    return require_order(scale_rational(shift(add_constant(e4_3, Rational(-1)), -2), make_rational(1, 2)), order,
                         "cubic_schwarzian_target");
}

RSeries e4_residual_for(const RSeries &t, int order)
{
    return require_order(schwarzian(t) + cubic_schwarzian_target(order), order, "e4_residual_for");
}

E4Residuals verify_e4_equation(int order)
{
    if (order < 7)
        throw std::invalid_argument("verify_e4_equation: order must be at least 7");
    const int n = order + margin;
    const CubicPencilData data = cubic_pencil_data(n);
    const RSeries h = data.eta - data.psi_ratio;
    const RSeries k = scale_rational(data.four_z2_psi2, Rational(2));
    const RSeries assembled = ode_reduce(h, k) - cubic_schwarzian_target(n);
    const RSeries f = eta_quotient_hauptmodul(n).series;
    return {require_order(assembled, order, "verify_e4_equation"), e4_residual_for(f, order)};
}

RSeries picard_fuchs_residual(const RSeries &t, int order)
{
    const int n = t.order();
    const RSeries t2 = t * t;
    const RSeries t3 = t2 * t;
    const RSeries num = add_constant(scale_rational(t3, Rational(216)), Rational(1));
    const RSeries w = add_constant(scale_rational(t3, Rational(27)), Rational(-1));
    const RSeries den = scale_rational(t2 * w * w, Rational(2));
    const RSeries dt = derivative(t);
    const RSeries pole = RSeries::monomial("q", -2, make_rational(1, 2), n);
    const RSeries residual = schwarzian(t) + num * invert(den) * dt * dt - pole;
    return require_order(residual, order, "picard_fuchs_residual");
}

RSeries verify_picard_fuchs(int order)
{
    if (order < 7)
        throw std::invalid_argument("verify_picard_fuchs: order must be at least 7");
    return picard_fuchs_residual(eta_quotient_hauptmodul(order + margin).series, order);
}

} // namespace qseries
