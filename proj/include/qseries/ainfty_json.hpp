#ifndef QSERIES_AINFTY_JSON_HPP
#define QSERIES_AINFTY_JSON_HPP

#include <optional>

#include <json.hpp>

#include <qseries/ainfty.hpp>

namespace qseries
{

// {"basis": [{"name", "degree"}], "unit"?: index,
//  "entries": [{"arity", "inputs", "output", "coeff_series"}],
//  "connection"?: [same entry format, degree-1 cochain]}
// coeff_series uses the series schema. Entries above the arity cap are
// dropped and coefficients are truncated to q_order.
struct AlgebraFile {
    AInfinityStructure structure;
    std::optional<Cochain> connection;
};

// Throws std::invalid_argument on malformed input, including entries whose
// degree is not that of mu^d.
AlgebraFile algebra_from_json(const nlohmann::json &j, int arity_cap, int q_order);

// {"degree", "arity_cap", "q_order", "entries": [...]} with entries in the
// file format, sorted by (arity, inputs, output).
nlohmann::json cochain_to_json(const Cochain &c);

} // namespace qseries

#endif
