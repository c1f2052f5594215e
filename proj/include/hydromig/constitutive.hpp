#ifndef HYDROMIG_CONSTITUTIVE_HPP
#define HYDROMIG_CONSTITUTIVE_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hydromig/fluid_params.hpp"

namespace hydromig {

/// Effective liquid saturation below which the capillary pressure evaluation
/// is refused (the van Genuchten curve blows up as S_le -> 0).
inline constexpr double eps_sat = 1e-9;

/// Per-zone rock description: absolute permeability, porosity and the
/// van Genuchten-Mualem curve parameters.
struct RockParams {
    double k;     ///< intrinsic permeability [m^2]
    double phi;   ///< porosity [-]
    double P_r;   ///< capillary pressure scale [Pa]
    double n;     ///< van Genuchten exponent [-]
    double m;     ///< = 1 - 1/n [-]
    double S_lr;  ///< residual liquid saturation [-]
    double S_gr;  ///< residual gas saturation [-]

    static RockParams make(double k, double phi, double P_r, double n,
                           double S_lr, double S_gr)
    {
        if (!(k > 0.0)) throw std::invalid_argument("rock: k must be positive");
        if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("rock: phi must lie in (0,1)");
        if (!(P_r > 0.0)) throw std::invalid_argument("rock: P_r must be positive");
        if (!(n > 1.0)) throw std::invalid_argument("rock: n must exceed 1");
        if (!(S_lr >= 0.0 && S_gr >= 0.0 && S_lr + S_gr < 1.0))
            throw std::invalid_argument("rock: need S_lr, S_gr >= 0 and S_lr + S_gr < 1");
        return RockParams{k, phi, P_r, n, 1.0 - 1.0 / n, S_lr, S_gr};
    }
};

/// S_le = (S_l - S_lr) / (1 - S_lr - S_gr), clamped to [0,1].
inline double effective_saturation(double S_l, const RockParams& rock)
{
    const double S_le = (S_l - rock.S_lr) / (1.0 - rock.S_lr - rock.S_gr);
    if (S_le < 0.0) return 0.0;
    if (S_le > 1.0) return 1.0;
    return S_le;
}

/// Largest gas saturation for which the capillary curve is still evaluated;
/// corresponds to S_le = eps_sat.
inline double max_gas_saturation(const RockParams& rock)
{
    return (1.0 - rock.S_lr) - eps_sat * (1.0 - rock.S_lr - rock.S_gr);
}

/// van Genuchten capillary pressure p_c(S_g) = P_r (S_le^{-1/m} - 1)^{1/n}.
/// There is no entry pressure: p_c(0) = 0.
inline double pc(double S_g, const RockParams& rock)
{
    if (S_g <= 0.0) return 0.0;
    const double S_le = effective_saturation(1.0 - S_g, rock);
    if (S_le >= 1.0) return 0.0; // inside residual gas range
    if (S_le < 0.9 * eps_sat)      // small slack below the clamp point
        throw std::domain_error("pc: S_g = " + std::to_string(S_g) +
                                " beyond overflow guard (S_le < eps_sat)");
    return rock.P_r * std::pow(std::pow(S_le, -1.0 / rock.m) - 1.0, 1.0 / rock.n);
}

/// Analytic derivative dp_c/dS_g.  Diverges to +inf as S_g -> 0 (and the
/// IEEE infinity is returned there); the consumers keep their own
/// coefficient formulas finite in that limit.
inline double dpc_dSg(double S_g, const RockParams& rock)
{
    const double span = 1.0 - rock.S_lr - rock.S_gr;
    const double S_le = effective_saturation(1.0 - S_g, rock);
    if (S_le >= 1.0) {
        // limit value: infinite slope for n < 2, finite only for n >= 2;
        // the exact vGM limit is +inf whenever 1/n < 1, which holds for n > 1
        return std::numeric_limits<double>::infinity();
    }
    if (S_le < 0.9 * eps_sat)
        throw std::domain_error("dpc_dSg: S_g beyond overflow guard");
    const double x = std::pow(S_le, -1.0 / rock.m) - 1.0;
    const double dpc_dSle = rock.P_r * (1.0 / rock.n) * std::pow(x, 1.0 / rock.n - 1.0) *
                            (-1.0 / rock.m) * std::pow(S_le, -1.0 / rock.m - 1.0);
    return dpc_dSle * (-1.0 / span);
}

struct Mobilities {
    double lambda_l; ///< liquid phase mobility [1/(Pa s)]
    double lambda_g; ///< gas phase mobility [1/(Pa s)]
};

/// van Genuchten-Mualem relative mobilities.
///   lambda_l = sqrt(S_le) (1 - (1 - S_le^{1/m})^m)^2 / mu_l
///   lambda_g = sqrt(1 - S_le) (1 - S_le^{1/m})^{2m} / mu_g
inline Mobilities mobilities(double S_l, const RockParams& rock, const FluidParams& fluid)
{
    const double S_le = effective_saturation(S_l, rock);
    if (S_le <= 0.0) return {0.0, 1.0 / fluid.mu_g};
    if (S_le >= 1.0) return {1.0 / fluid.mu_l, 0.0};
    const double s1m = std::pow(S_le, 1.0 / rock.m);
    const double lam_l = std::sqrt(S_le) * std::pow(1.0 - std::pow(1.0 - s1m, rock.m), 2.0) / fluid.mu_l;
    const double lam_g = std::sqrt(1.0 - S_le) * std::pow(1.0 - s1m, 2.0 * rock.m) / fluid.mu_g;
    return {lam_l, lam_g};
}

} // namespace hydromig

#endif
