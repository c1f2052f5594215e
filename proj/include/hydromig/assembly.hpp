#ifndef HYDROMIG_ASSEMBLY_HPP
#define HYDROMIG_ASSEMBLY_HPP

#include <span>
#include <vector>

#include "hydromig/banded.hpp"
#include "hydromig/scenario.hpp"

namespace hydromig {

/// Flat unknown vector, cell-major: [p_l(0), rho_l_h(0), p_l(1), ...].
using StateVector = std::vector<double>;

inline CellState cell_state(std::span<const double> u, int i)
{
    return CellState{u[2 * static_cast<std::size_t>(i)], u[2 * static_cast<std::size_t>(i) + 1]};
}

StateVector initial_state_vector(const Scenario& sc);

/// Component mass fluxes through one face, positive in +x direction.
struct FaceFlux {
    double water = 0.0;    ///< [kg/s]
    double hydrogen = 0.0; ///< [kg/s]
    double q_l = 0.0;      ///< liquid Darcy flux [m/s]
    double q_g = 0.0;      ///< gas Darcy flux [m/s]
};

/// Half-distances from the adjacent cell centers to the face.  A zero
/// half-distance marks a Dirichlet ghost sitting directly on the face.
struct FaceGeom {
    double area;    ///< [m^2]
    double d_left;  ///< [m]
    double d_right; ///< [m]
};

/// Two-point flux through one face.
///
/// Liquid Darcy flux: harmonic-in-half-distance permeability, phase-potential
/// upwinded mobility; the upwind side is chosen with the arithmetic-mean
/// liquid density and the flux then uses the upwind cell's density (one
/// fixed-point pass).  Gas Darcy flux is analogous with the p_g potential
/// (capillary-law pressure, continued by the hypothetical Henry pressure
/// rho_l_h / C_h into saturated cells) and the upwind face gas density
/// C_v p_g.  The dissolved-hydrogen diffusive flux uses the distance-weighted
/// harmonic mean of phi S_l D with the arithmetic mean of S_l.
///
/// Component fluxes: water = rho_w q_l - j, hydrogen = rho_l_h^up q_l
/// + C_v p_g^up q_g + j.
FaceFlux face_flux(const CellState& left, const CellState& right,
                   const RockParams& rock_left, const RockParams& rock_right,
                   const FaceGeom& geom, const FluidParams& fluid, double gravity_x);

/// Boundary-face flux: Neumann data is imposed directly (sign-adjusted so
/// positive config values mean mass entering the domain); Dirichlet data
/// builds a ghost state on the face and reuses the two-point flux with the
/// half-cell transmissibility.
FaceFlux boundary_flux(const BoundaryCondition& bc, bool left_side,
                       const CellState& cell, const RockParams& rock,
                       double half_width, double area, const FluidParams& fluid,
                       double gravity_x);

/// All n_cells + 1 face fluxes of the mesh evaluated at state u.
/// The plain variant is the serial reference; the default one runs the same
/// per-face kernel under OpenMP.
void compute_face_fluxes_serial(std::span<const double> u, const Scenario& sc,
                                std::span<FaceFlux> faces);
void compute_face_fluxes(std::span<const double> u, const Scenario& sc,
                         std::span<FaceFlux> faces);

/// Fully implicit residual of the (p_l, rho_l_h) system, one pair of entries
/// per cell [kg/s]:
///   R_w(i) = phi rho_w (S_l_new - S_l_old) V/dt + F_w(i+1/2) - F_w(i-1/2)
///   R_h(i) = phi (a* rho_l_h)_new-old V/dt     + F_h(i+1/2) - F_h(i-1/2)
/// Face quantities are evaluated at the new state.  `faces` receives the
/// fluxes used (size n_cells + 1).
void assemble_residual_serial(std::span<const double> u_old, std::span<const double> u_new,
                              double dt, const Scenario& sc, std::span<double> R,
                              std::span<FaceFlux> faces);
void assemble_residual(std::span<const double> u_old, std::span<const double> u_new,
                       double dt, const Scenario& sc, std::span<double> R,
                       std::span<FaceFlux> faces);

/// Finite-difference Jacobian dR/du at u_new, exactly block-tridiagonal
/// (kl = ku = 3 in scalar indices).  Perturbations are one-sided away from
/// the phase threshold so the difference never straddles the kink of the
/// saturation map.
void assemble_jacobian_serial(std::span<const double> u_old, std::span<const double> u_new,
                              double dt, const Scenario& sc, BandedMatrix& J);
void assemble_jacobian(std::span<const double> u_old, std::span<const double> u_new,
                       double dt, const Scenario& sc, BandedMatrix& J);

} // namespace hydromig

#endif
