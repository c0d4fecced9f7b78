#ifndef QSERIES_GW_PIPELINE_HPP
#define QSERIES_GW_PIPELINE_HPP

#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include <qseries/bfield.hpp>
#include <qseries/novikov.hpp>

namespace qseries
{

// One- and two-pointed invariants on a lattice: z1 defines the derivation,
// z2 = sum c_A q^A is a degree-4 element at levels >= 0.
struct GwData {
    LatticePtr lattice;
    Derivation z1;
    std::vector<std::pair<Point, Rational>> z2;

    NovikovElement z2_element(int cap) const;
};

// {"rank", "m", "e", "A_star", "A_basis", "D_basis", "z1": [{"A", "class":
// {"dE", "M", "D"}}], "z2": [{"A", "coeff"}], "box": {"base", "slope"}};
// "box" is optional, rationals are strings "p/q" or integers. Throws
// std::invalid_argument on malformed or inconsistent data.
GwData gw_data_from_json(const nlohmann::json &j);

// The quintic pencil on Z^2 (r = 0): z1 = psi^-1 (q^-1 [dE] + eta [M]) and z2
// placed at (m, e) = (1, e) and (2, e), with data through filtration level
// `level_cap` + 1.
GwData quintic_gw_data(int level_cap);

struct MainPipelineResult {
    RSeries f;               // K(f_Lambda), t-power 0
    std::vector<RSeries> g;  // K(g_{Lambda,k})
    NormalizedBField b_field;
    ChangeOfVariables substitution;
    RSeries f_via_b;         // G_B(K_B(f_Lambda))
    bool span_condition = false;
    std::optional<PencilFromLattice> pencil;
};

// Solves for f_Lambda (S_z f + 8 z2 = 0, degree 0) and the flat g_{Lambda,k}
// through filtration cap `cap`, then specializes. Cross-checks, each throwing
// std::logic_error on failure:
//   G_B o K_B = K on f_Lambda;
//   K_B(g_{Lambda,k}) = q_k and G_B(q_k) = g_k when the D_k are dual to the A_k;
//   S_{B,t} f_B + 8 z2_B t^2 = 0;
//   under the span condition, g_k = 1 and S_{q,t} f + 8 z2 t^2 = 0.
MainPipelineResult theorem_main_pipeline(const GwData &data, int cap);

} // namespace qseries

#endif
