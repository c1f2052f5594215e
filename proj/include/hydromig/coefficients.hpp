#ifndef HYDROMIG_COEFFICIENTS_HPP
#define HYDROMIG_COEFFICIENTS_HPP

#include <cmath>
#include <stdexcept>

#include "hydromig/fluid.hpp"

namespace hydromig {

/// Pointwise PDE coefficients of the solved (p_l, rho_l_h) system.  The A
/// coefficients multiply the unknown gradients (the scalar permeability is
/// already folded in), the B coefficients multiply k * g in the gravity flux,
/// and acc_w / acc_h are the densities under the time derivatives.
struct CoeffSetPR {
    double A11; ///< lambda_l rho_w k
    double A12; ///< -phi (1 - S_g) D
    double A21; ///< lambda_l rho_l_h k
    double A22; ///< lambda_g (C_v / C_h^2) rho_l_h k + phi (1 - S_g) D
    double B1;  ///< -lambda_l rho_w (rho_w + rho_l_h)
    double B2;  ///< -lambda_l rho_l_h (rho_w + rho_l_h) - lambda_g (C_v^2 / C_h^2) rho_l_h^2
    double acc_w; ///< -phi rho_w S_g
    double acc_h; ///< phi a*(S_g) rho_l_h
};

inline CoeffSetPR coeffs_pr(const CellState& u, const RockParams& rock,
                            const FluidParams& fluid)
{
    const SecondaryState s = secondary_state(u, rock, fluid);
    const auto [lam_l, lam_g] = mobilities(s.S_l, rock, fluid);
    const double r = u.rho_l_h;
    const double rho_w = fluid.rho_w_std;
    const double diff = rock.phi * s.S_l * fluid.D;

    CoeffSetPR c{};
    c.A11 = lam_l * rho_w * rock.k;
    c.A12 = -diff;
    c.A21 = lam_l * r * rock.k;
    c.A22 = lam_g * (fluid.C_v / (fluid.C_h * fluid.C_h)) * r * rock.k + diff;
    c.B1 = -lam_l * rho_w * (rho_w + r);
    c.B2 = -lam_l * r * (rho_w + r) -
           lam_g * (fluid.C_v * fluid.C_v / (fluid.C_h * fluid.C_h)) * r * r;
    c.acc_w = -rock.phi * rho_w * s.S_g;
    c.acc_h = rock.phi * a_star(s.S_g, fluid) * r;
    return c;
}

/// 1-D quadratic form xi . A22 . xi of the hydrogen equation; strictly
/// positive whenever diffusion is active and S_g < 1.
inline double quadratic_form_check(const CoeffSetPR& c, double xi)
{
    return xi * c.A22 * xi;
}

/// Coefficients of the diagnostic (p_l, rho_tot) formulation, together with
/// the saturation partials and the auxiliary function N.
struct CoeffSetTot {
    double A11, A12, A21, A22, B1, B2;
    double N;         ///< in [0, 1); zero in the liquid-saturated region
    double dSg_dpl;   ///< <= 0
    double dSg_drho;  ///< >= 0
    double S_g;
    double rho_l_h;   ///< min(C_h p_g, rho_tot)
    double p_g;
};

namespace detail {

/// Inverts rho_tot = a(S_g) (p_l + p_c(S_g)) for S_g on the unsaturated
/// branch (strictly monotone in S_g for p_l + p_c > 0).
inline double invert_total_concentration(double p_l, double rho_tot,
                                         const RockParams& rock, const FluidParams& fluid)
{
    const double S_max = max_gas_saturation(rock);
    auto g = [&](double S) { return a_func(S, fluid) * (p_l + pc(S, rock)) - rho_tot; };
    double lo = 0.0, hi = S_max;
    if (g(hi) < 0.0)
        throw std::runtime_error("invert_total_concentration: rho_tot beyond evaluable range");
    double S = 0.5 * S_max;
    for (int it = 0; it < 200; ++it) {
        const double f = g(S);
        if (f > 0.0) hi = S; else lo = S;
        const double dg = (fluid.C_v - fluid.C_h) * (p_l + pc(S, rock)) +
                          a_func(S, fluid) * dpc_dSg(S, rock);
        double S_next = S - f / dg;
        if (!(S_next > lo && S_next < hi)) S_next = 0.5 * (lo + hi);
        const double change = std::fabs(S_next - S);
        S = S_next;
        if (change <= 1e-14 * (1.0 + S)) break;
    }
    return S;
}

} // namespace detail

inline CoeffSetTot coeffs_total(double p_l, double rho_tot, const RockParams& rock,
                                const FluidParams& fluid)
{
    if (!(rho_tot >= 0.0))
        throw std::invalid_argument("coeffs_total: rho_tot must be nonnegative");

    const double C_h = fluid.C_h, C_v = fluid.C_v, C_d = C_v - C_h;
    const double threshold = C_h * (p_l + pc(0.0, rock));

    CoeffSetTot c{};
    if (rho_tot > threshold) {
        c.S_g = detail::invert_total_concentration(p_l, rho_tot, rock, fluid);
        c.p_g = p_l + pc(c.S_g, rock);
        const double a = a_func(c.S_g, fluid);
        const double pcp = dpc_dSg(c.S_g, rock); // may be +inf right at the threshold
        const double denom = C_d * rho_tot + a * a * pcp;
        c.N = (C_d * rho_tot) / denom;
        c.dSg_dpl = -(a * a) / denom;
        c.dSg_drho = a / denom;
    } else {
        c.S_g = 0.0;
        c.p_g = p_l + pc(0.0, rock);
        c.N = 0.0;
        c.dSg_dpl = 0.0;
        c.dSg_drho = 0.0;
    }
    c.rho_l_h = std::min(C_h * c.p_g, rho_tot);

    const auto [lam_l, lam_g] = mobilities(1.0 - c.S_g, rock, fluid);
    const double rho_w = fluid.rho_w_std;
    const double diff = rock.phi * (1.0 - c.S_g) * fluid.D;
    const double one_minus_N_over_a = (1.0 - c.N) / a_func(c.S_g, fluid);

    c.A11 = lam_l * rho_w * rock.k - diff * C_h * c.N;
    c.A12 = -diff * one_minus_N_over_a * C_h;
    c.A21 = (lam_l * c.rho_l_h + lam_g * C_v * c.p_g * c.N) * rock.k + diff * C_h * c.N;
    c.A22 = lam_g * one_minus_N_over_a * C_v * c.p_g * rock.k + diff * one_minus_N_over_a * C_h;
    c.B1 = -lam_l * rho_w * (rho_w + c.rho_l_h);
    c.B2 = -(lam_l * c.rho_l_h * (rho_w + c.rho_l_h) + lam_g * C_v * C_v * c.p_g * c.p_g);
    return c;
}

} // namespace hydromig

#endif
