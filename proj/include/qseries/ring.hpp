#ifndef QSERIES_RING_HPP
#define QSERIES_RING_HPP

#include <stdexcept>

#include <qseries/rational.hpp>

namespace qseries
{

// Coefficient-ring interface used by Series<C>. A ring type C must provide
// +, -, * with itself and * with Rational (the rings here are all Q-algebras,
// which is what exp/log/antiderivative need), plus a specialization of this
// traits struct.
template <typename C>
struct ring_traits;

template <>
struct ring_traits<Rational> {
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_rational(const Rational &r) { return r; }
    static bool is_zero(const Rational &c) { return sgn(c) == 0; }
    static bool is_unit(const Rational &c) { return sgn(c) != 0; }
    static Rational inverse(const Rational &c)
    {
        if (sgn(c) == 0)
            throw std::domain_error("division by zero rational");
        return Rational(1) / c;
    }
};

} // namespace qseries

#endif
