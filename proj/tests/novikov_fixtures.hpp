#ifndef QSERIES_TESTS_NOVIKOV_FIXTURES_HPP
#define QSERIES_TESTS_NOVIKOV_FIXTURES_HPP

#include <vector>

#include <qseries/bfield.hpp>
#include <qseries/novikov.hpp>

#include "oracles.hpp"

namespace fixture
{

using namespace qseries;

// Z^{r+2} in coordinates (m, e, d_1..d_r): m, e, D_k are the coordinate
// functionals, A* = (1, -1, 0..), A_k the unit vectors.
inline LatticePtr coordinate_lattice(int r, SupportBox box = {})
{
    const std::size_t n = static_cast<std::size_t>(r + 2);
    auto unit = [n](std::size_t i) {
        std::vector<long long> v(n, 0);
        v[i] = 1;
        return v;
    };
    Point a_star(n, 0);
    a_star[0] = 1;
    a_star[1] = -1;
    std::vector<Point> a_basis;
    std::vector<Covector> d_basis;
    for (std::size_t k = 2; k < n; ++k) {
        a_basis.push_back(unit(k));
        d_basis.push_back(unit(k));
    }
    return LatticeSpec::make(unit(0), unit(1), a_star, a_basis, d_basis, box, true);
}

inline Point point(const LatticeSpec &lat, long long m, long long e, const std::vector<long long> &d = {})
{
    Point p{m, e};
    for (int k = 0; k < lat.r(); ++k)
        p.push_back(k < static_cast<int>(d.size()) ? d[static_cast<std::size_t>(k)] : 0);
    return p;
}

inline std::vector<long long> random_d(const LatticeSpec &lat, oracle::RandomRationals &rng, int spread)
{
    std::vector<long long> d;
    for (int k = 0; k < lat.r(); ++k)
        d.push_back(rng.uniform(-spread, spread));
    return d;
}

// [dE] q^{A*} plus `count` random classes at levels 0..max_level; with
// span_only the classes have no D-components.
inline Derivation random_derivation(const LatticePtr &lat, oracle::RandomRationals &rng, int max_level, int count,
                                    bool span_only = false)
{
    const std::size_t n = static_cast<std::size_t>(lat->rank());
    ClassVec lead(n, Rational(0));
    lead[0] = 1;
    std::vector<DerivationTerm> terms{{lat->a_star(), lead}};
    for (int i = 0; i < count; ++i) {
        ClassVec c(n, Rational(0));
        for (std::size_t j = 0; j < n; ++j)
            if (!span_only || j < 2)
                c[j] = rng.next(3);
        const std::vector<long long> d = span_only ? std::vector<long long>{} : random_d(*lat, rng, 1);
        terms.push_back({point(*lat, 1, rng.uniform(0, max_level), d), c});
    }
    return Derivation(lat, terms);
}

inline NovikovElement random_element(const LatticePtr &lat, oracle::RandomRationals &rng, int degree, int lo, int hi,
                                     int cap, int count)
{
    NovikovElement x(lat, degree, cap);
    for (int i = 0; i < count; ++i)
        x.add_term(point(*lat, degree / 2, rng.uniform(lo, hi), random_d(*lat, rng, 2)), rng.next(4));
    return x;
}

} // namespace fixture

#endif
