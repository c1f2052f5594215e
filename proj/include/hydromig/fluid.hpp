#ifndef HYDROMIG_FLUID_HPP
#define HYDROMIG_FLUID_HPP

#include <cmath>

#include "hydromig/constitutive.hpp"
#include "hydromig/fluid_params.hpp"

namespace hydromig {

/// Primary unknowns of one cell.
struct CellState {
    double p_l;      ///< liquid pressure [Pa]
    double rho_l_h;  ///< dissolved hydrogen mass concentration [kg/m^3]
};

/// Quantities derived from the primary unknowns through the phase map.
struct SecondaryState {
    double S_g;     ///< gas saturation [-]
    double S_l;     ///< liquid saturation, 1 - S_g [-]
    double p_g;     ///< gas pressure [Pa]; hypothetical equilibrium value rho_l_h/C_h when S_g = 0
    double rho_g;   ///< gas density C_v * p_g [kg/m^3]
    double rho_tot; ///< total hydrogen mass per pore volume, S_l rho_l_h + S_g rho_g [kg/m^3]
};

/// Inverse of the capillary pressure curve, extended by 0 below the entry
/// pressure:
///   f(pi) = 0                      for pi <= p_c(0)
///   f(pi) = unique S_g, p_c(S_g) = pi   otherwise.
///
/// The analytic van Genuchten inverse S_le = (1 + (pi/P_r)^n)^(-m) seeds a
/// safeguarded Newton iteration (bisection fallback) that polishes the root
/// of p_c(S_g) - pi to 1e-12 absolute in S_g.  Arguments beyond the curve's
/// evaluable range are clamped to the S_le = eps_sat saturation and reported
/// through `clamped`.
inline double capillary_inverse(double pi, const RockParams& rock, bool* clamped = nullptr)
{
    if (clamped) *clamped = false;
    if (!(pi > 0.0)) return 0.0;

    const double span = 1.0 - rock.S_lr - rock.S_gr;
    const double S_le_hat = std::pow(1.0 + std::pow(pi / rock.P_r, rock.n), -rock.m);
    if (S_le_hat < eps_sat) {
        if (clamped) *clamped = true;
        return max_gas_saturation(rock);
    }
    double S = (1.0 - rock.S_lr) - S_le_hat * span;
    if (S <= 0.0) return 0.0;

    double lo = 0.0;                       // pc(lo) < pi
    double hi = max_gas_saturation(rock);  // pc(hi) >= pi after the clamp test
    // converge essentially to the floating-point fixed point; the steep parts
    // of the curve would otherwise leak an S error of ~1e-12 into a visible
    // Henry-equilibrium defect through p_c'(S_g)
    constexpr double tol = 1e-15;
    for (int it = 0; it < 100; ++it) {
        const double f = pc(S, rock) - pi;
        if (f > 0.0) hi = S; else lo = S;
        const double df = dpc_dSg(S, rock);
        double S_next = S - f / df;  // df = +inf at S = 0 gives a zero step
        if (!(S_next > lo && S_next < hi)) S_next = 0.5 * (lo + hi);
        const double change = std::fabs(S_next - S);
        S = S_next;
        if (change <= tol) break;
    }
    return S;
}

/// Gas saturation from the primary unknowns: S_g = f(rho_l_h / C_h - p_l).
/// Exactly zero on and below the concentration threshold line.
inline double saturation_from_state(const CellState& u, const RockParams& rock,
                                    const FluidParams& fluid, bool* clamped = nullptr)
{
    return capillary_inverse(u.rho_l_h / fluid.C_h - u.p_l, rock, clamped);
}

/// a(S_g) = C_h (1 - S_g) + C_v S_g, the slope of total hydrogen
/// concentration with respect to gas pressure.
inline double a_func(double S_g, const FluidParams& fluid)
{
    return fluid.C_h * (1.0 - S_g) + fluid.C_v * S_g;
}

/// a*(S_g) = a(S_g) / C_h; equals 1 in the liquid-saturated region.
inline double a_star(double S_g, const FluidParams& fluid)
{
    return 1.0 + (fluid.C_v / fluid.C_h - 1.0) * S_g;
}

/// Full phase map.  In the two-phase region the gas pressure follows the
/// capillary law p_g = p_l + p_c(S_g); in the liquid-saturated region the
/// hypothetical equilibrium pressure rho_l_h / C_h is reported instead, which
/// keeps every output continuous across the threshold and makes the
/// unilateral condition S_g (C_h p_g - rho_l_h) = 0 checkable with a single
/// formula.
inline SecondaryState secondary_state(const CellState& u, const RockParams& rock,
                                      const FluidParams& fluid)
{
    SecondaryState s{};
    s.S_g = saturation_from_state(u, rock, fluid);
    s.S_l = 1.0 - s.S_g;
    if (s.S_g > 0.0) {
        s.p_g = u.p_l + pc(s.S_g, rock);
        s.rho_g = fluid.C_v * s.p_g;
        s.rho_tot = s.S_l * u.rho_l_h + s.S_g * s.rho_g;
    } else {
        s.p_g = u.rho_l_h / fluid.C_h;
        s.rho_g = fluid.C_v * s.p_g;
        s.rho_tot = u.rho_l_h;
    }
    return s;
}

/// Residual of the unilateral (complementarity) condition; zero to round-off
/// for every state produced by secondary_state.
inline double unilateral_residual(const CellState& u, const SecondaryState& s,
                                  const FluidParams& fluid)
{
    return s.S_g * (fluid.C_h * s.p_g - u.rho_l_h);
}

} // namespace hydromig

#endif
