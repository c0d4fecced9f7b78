#include <qseries/series_json.hpp>

#include <map>
#include <stdexcept>
#include <string>

namespace qseries
{

nlohmann::json series_to_json(const RSeries &s)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[e, c] : s.terms())
        terms.push_back({{"exp", e}, {"coeff", to_string(c)}});
    return {{"var", s.var()}, {"min_exp", std::min(s.valuation(), s.order())}, {"order", s.order()}, {"terms", terms}};
}

RSeries series_from_json(const nlohmann::json &j)
{
    try {
        const std::string var = j.at("var").get<std::string>();
        const int order = j.at("order").get<int>();
        const int min_exp = j.contains("min_exp") ? j.at("min_exp").get<int>() : 0;
        std::map<int, Rational> terms;
        for (const auto &t : j.at("terms")) {
            const int e = t.at("exp").get<int>();
            if (e >= order || e < min_exp)
                throw std::invalid_argument("series term exponent " + std::to_string(e) + " outside [min_exp, order)");
            const auto &c = t.at("coeff");
            const Rational value = c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>());
            if (!terms.emplace(e, value).second)
                throw std::invalid_argument("duplicate series exponent " + std::to_string(e));
        }
        RSeries s = RSeries::from_terms(var, order, terms);
        if (min_exp < s.min_exp() && min_exp < order)
            s.set_coeff(min_exp, Rational(0));
        return s;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("malformed series JSON: ") + e.what());
    }
}

} // namespace qseries
