#ifndef QSERIES_SERIES_JSON_HPP
#define QSERIES_SERIES_JSON_HPP

#include <json.hpp>

#include <qseries/series.hpp>

namespace qseries
{

// {"var", "min_exp", "order", "terms": [{"exp", "coeff"}]}; terms ascending,
// nonzero only.
nlohmann::json series_to_json(const RSeries &s);

// Throws std::invalid_argument on malformed input.
RSeries series_from_json(const nlohmann::json &j);

} // namespace qseries

#endif
