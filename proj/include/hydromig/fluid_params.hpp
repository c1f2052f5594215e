#ifndef HYDROMIG_FLUID_PARAMS_HPP
#define HYDROMIG_FLUID_PARAMS_HPP

#include <stdexcept>
#include <utility>

#include "hydromig/units.hpp"

namespace hydromig {

/// Henry and ideal-gas slopes derived from the raw component constants:
///   C_h = H * M_h          (dissolved mass concentration per gas pressure)
///   C_v = M_h / (R * T)    (gas density per gas pressure)
/// The weak-solubility ordering C_v > C_h is a structural assumption of the
/// whole model (it makes a(S_g) strictly increasing); violating inputs are
/// rejected.
inline std::pair<double, double> derive_constants(double M_h, double H, double T,
                                                  double R = gas_constant)
{
    if (!(M_h > 0.0 && H > 0.0 && T > 0.0 && R > 0.0))
        throw std::invalid_argument("derive_constants: all inputs must be positive");
    const double C_h = H * M_h;
    const double C_v = M_h / (R * T);
    if (!(C_v > C_h))
        throw std::invalid_argument("derive_constants: C_v <= C_h violates the weak-solubility ordering");
    return {C_h, C_v};
}

/// Component/phase constants of the water + hydrogen system.
struct FluidParams {
    double rho_w_std; ///< standard water density [kg/m^3]
    double mu_l;      ///< liquid viscosity [Pa s]
    double mu_g;      ///< gas viscosity [Pa s]
    double D;         ///< hydrogen molecular diffusion in liquid [m^2/s]
    double M_w;       ///< water molar mass [kg/mol]
    double M_h;      ///< hydrogen molar mass [kg/mol]
    double H;         ///< Henry constant [mol/(Pa m^3)]
    double T;         ///< temperature [K]
    double C_h;       ///< Henry slope [kg/(m^3 Pa)]
    double C_v;       ///< ideal-gas slope [kg/(m^3 Pa)]

    static FluidParams make(double rho_w_std, double mu_l, double mu_g, double D,
                            double M_w, double M_h, double H, double T)
    {
        if (!(rho_w_std > 0.0 && mu_l > 0.0 && mu_g > 0.0 && D > 0.0 && M_w > 0.0))
            throw std::invalid_argument("fluid: all parameters must be positive");
        auto [C_h, C_v] = derive_constants(M_h, H, T);
        return FluidParams{rho_w_std, mu_l, mu_g, D, M_w, M_h, H, T, C_h, C_v};
    }

    /// Standard water/hydrogen parameter set at 303 K.
    static FluidParams water_hydrogen()
    {
        return make(/*rho_w_std=*/1e3, /*mu_l=*/1e-3, /*mu_g=*/9e-6, /*D=*/3e-9,
                    /*M_w=*/1e-2, /*M_h=*/2e-3, /*H=*/7.65e-6, /*T=*/303.0);
    }
};

} // namespace hydromig

#endif
