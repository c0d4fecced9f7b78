#ifndef QSERIES_GOLDEN_HPP
#define QSERIES_GOLDEN_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <qseries/series.hpp>

namespace qseries
{

// A published truncated series: all coefficients below `order` are known,
// and those absent from `terms` are zero.
struct GoldenSeries {
    std::string name;
    std::string var;
    int order;
    std::map<int, long long> terms;
};

GoldenSeries golden_cubic_f();
// psi, eta, z2, f in q.
std::vector<GoldenSeries> golden_quintic_pencil();
// y1 / q1 and y2 in q2.
std::vector<GoldenSeries> golden_quintic_mirror();

// First exponent below min(s.order(), g.order) where s differs from g.
std::optional<int> golden_mismatch(const RSeries &s, const GoldenSeries &g);

} // namespace qseries

#endif
