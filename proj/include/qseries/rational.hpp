#ifndef QSERIES_RATIONAL_HPP
#define QSERIES_RATIONAL_HPP

#include <string>
#include <string_view>

#include <gmpxx.h>

namespace qseries
{

// Exact rationals. GMP keeps mpq_class values canonical (reduced, positive
// denominator) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p" or "p/q" (optional sign on p). Throws std::invalid_argument on
// malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

// Inverse of parse_rational: "p" when the denominator is 1, "p/q" otherwise.
std::string to_string(const Rational &r);

inline Rational make_rational(long num, long den = 1)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

} // namespace qseries

#endif
