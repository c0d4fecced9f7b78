#include <qseries/golden.hpp>

#include <algorithm>

namespace qseries
{

GoldenSeries golden_cubic_f()
{
    return {"f", "q", 14, {{1, 1}, {4, -5}, {7, 32}, {10, -198}, {13, 1214}}};
}

std::vector<GoldenSeries> golden_quintic_pencil()
{
    return {
        {"psi", "q", 16, {{0, 1}, {5, -496}, {10, -335007}, {15, -365737016}}},
        {"eta", "q", 15, {{4, 940}, {9, 856700}, {14, 1097543500}}},
        {"z2", "q", 14, {{3, 600}, {8, 1508700}, {13, 3364924200LL}}},
        {"f", "q", 17, {{1, 1}, {6, -154}, {11, -13127}, {16, -17106304}}},
    };
}

std::vector<GoldenSeries> golden_quintic_mirror()
{
    return {
        {"y1/q1", "q2", 4, {{0, 1}, {1, -274}, {2, -50747}, {3, -56404664}}},
        // q2^4 as implied by the closed form for l2.
        {"y2", "q2", 5, {{1, 1}, {2, -770}, {3, 171525}, {4, -81623000}}},
    };
}

std::optional<int> golden_mismatch(const RSeries &s, const GoldenSeries &g)
{
    const int upto = std::min(s.order(), g.order);
    for (int e = std::min(s.min_exp(), 0); e < upto; ++e) {
        auto it = g.terms.find(e);
        const Rational want = it == g.terms.end() ? Rational(0) : Rational(static_cast<long>(it->second));
        if (s.coeff_or_zero(e) != want)
            return e;
    }
    return std::nullopt;
}

} // namespace qseries
