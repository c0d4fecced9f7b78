#ifndef QSERIES_MODULAR_HPP
#define QSERIES_MODULAR_HPP

#include <string>

#include <qseries/series.hpp>

namespace qseries
{

enum class ModularKind { eisenstein_2, eisenstein_4, eta_quotient, assembled };

std::string to_string(ModularKind kind);

struct ModularExpansion {
    RSeries series;
    ModularKind kind;
};

// E_2 = 1 - 24 sum sigma_1(n) q^n and E_4 = 1 + 240 sum sigma_3(n) q^n,
// through order N. Throws std::invalid_argument for any other weight or N < 1.
ModularExpansion eisenstein(int weight, int order);

// Euler product prod_{n >= 1} (1 - q^n) through order N.
RSeries euler_product(int order);

// 12 q E_2' - E_2^2 + E_4 through order N; identically zero.
RSeries verify_ramanujan(int order);

// u = q^-1 prod ((1 - q^n) / (1 - q^{9n}))^3, known through order N - 1.
ModularExpansion eta_quotient_u(int order);

// f = 1 / (u + 3) = q - 5 q^4 + ... through order N.
ModularExpansion eta_quotient_hauptmodul(int order);

struct CubicPencilData {
    RSeries psi_ratio;    // psi' / psi = (E_2(q^3) - 1) / (2q)
    RSeries eta;          // -psi' / psi
    RSeries alpha;        // (E_2(q^3) - 9 E_2(q^9)) / (8q), Laurent
    RSeries four_z2_psi2; // alpha^2 - alpha' + 2 alpha psi'/psi
};

// All four series known through order N. Requires N >= 4.
CubicPencilData cubic_pencil_data(int order);

// (E_4(q^3) - 1) / (2 q^2) through order N.
RSeries cubic_schwarzian_target(int order);

struct E4Residuals {
    RSeries assembled; // 8 z2 psi^2 + h' + h^2/2 - target, with h = eta - psi'/psi
    RSeries direct;    // S_q f + target for the eta-quotient f
};

// Requires N >= 7. Both residuals are known through order N.
E4Residuals verify_e4_equation(int order);

// Same direct residual with f replaced by an arbitrary candidate t.
RSeries e4_residual_for(const RSeries &t, int order);

// S_q t + (216 t^3 + 1) / (2 t^2 (27 t^3 - 1)^2) t'^2 - 1 / (2 q^2) through
// order N, for t = the eta-quotient f. Requires N >= 7.
RSeries verify_picard_fuchs(int order);

// Picard-Fuchs residual for an arbitrary t = q + O(q^2) known to order >= N + 3.
RSeries picard_fuchs_residual(const RSeries &t, int order);

} // namespace qseries

#endif
