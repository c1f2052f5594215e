#ifndef HYDROMIG_SOLVER_HPP
#define HYDROMIG_SOLVER_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hydromig/assembly.hpp"
#include "hydromig/scenario.hpp"

namespace hydromig {

struct SolverSettings {
    // tolerances on the scaled residuals |R| dt / (V phi rho_ref), per equation
    double tol_r_w = 1e-9;
    double tol_r_h = 1e-9;
    double tol_update = 1e-7; ///< on the scaled Newton update
    int max_newton = 12;
    double dt_growth = 1.3;
    double dt_cut = 0.5;
    int max_dt_cuts = 30;       ///< consecutive failed steps before aborting
    int grow_iters = 6;         ///< dt grows only when Newton needed at most this many iterations
    double p_scale = 1e6;       ///< [Pa] unknown scaling
    double r_scale = 0.0;       ///< [kg/m^3]; 0 selects C_h * 1e6
    bool parallel = true;       ///< OpenMP assembly kernels
    double stationary_flux_frac = 1e-3; ///< water-flux fraction defining stationarity

    void validate() const;
};

struct NewtonStats {
    int iterations = 0;
    bool converged = false;
    bool clipped = false;      ///< rho_l_h was clipped at zero during the iteration
    bool regularized = false;  ///< the linear solve needed a diagonal shift
    double res_w = 0.0;        ///< final scaled water residual norm
    double res_h = 0.0;        ///< final scaled hydrogen residual norm
};

/// One damped implicit-Euler step: guess -> solution of R(u_old -> u) = 0.
/// Returns std::nullopt (and leaves no side effects) when Newton fails.
std::optional<StateVector> newton_step(const StateVector& u_old, const StateVector& guess,
                                       double dt, const Scenario& sc,
                                       const SolverSettings& settings, NewtonStats& stats);

/// Per accepted step diagnostics and mass ledger entries.
struct StepRecord {
    double t = 0.0;  ///< [s]
    double dt = 0.0; ///< [s]; zero for the initial record
    int newton_iters = 0;
    double max_Sg = 0.0;
    double Sg_first_cell = 0.0;
    double max_adjacent_Sg_jump = 0.0;
    double front_x = -1.0;       ///< rightmost cell center with S_g > 1e-4, -1 if none
    double max_pl = 0.0;
    double max_abs_ql = 0.0;     ///< [m/s]
    double max_abs_Fw = 0.0;     ///< per area [kg/m^2/s]
    double max_abs_Fh = 0.0;     ///< per area [kg/m^2/s]
    double iface_pc_mismatch = -1.0; ///< relative capillary mismatch at rock interfaces with gas on both sides
    // mass ledger [kg]
    double mass_w = 0.0;
    double mass_h = 0.0;
    double cum_in_w = 0.0;  ///< through the left face, positive into the domain
    double cum_in_h = 0.0;
    double cum_out_w = 0.0; ///< through the right face, positive out of the domain
    double cum_out_h = 0.0;
    double balance_w = 0.0; ///< mass change minus net boundary inflow
    double balance_h = 0.0;
};

struct Snapshot {
    double t = 0.0;
    std::vector<CellState> states;
    std::vector<SecondaryState> secondary;
    std::vector<FaceFlux> faces;
};

struct Events {
    std::optional<double> first_gas_appearance_t; ///< first time with max S_g > 1e-8 [s]
    /// maximal spans where some cell shows S_g = 0 after previously having gas
    std::vector<std::array<double, 2>> gas_disappearance_intervals;
    double p_l_peak_t = 0.0;
    double p_l_peak_value = 0.0;
    std::optional<double> stationarity_t; ///< water fluxes permanently below the stationary fraction
};

struct SolveReport {
    Scenario scenario;
    std::vector<StepRecord> steps; ///< steps[0] is the initial state
    std::vector<Snapshot> snapshots;
    Events events;
    bool completed = false;
    std::string abort_reason;
    StateVector final_state;
    int total_newton_iterations = 0;
};

/// Transient driver: adaptive implicit Euler from t = 0 to t_end, hitting
/// every snapshot time exactly.
SolveReport run(const Scenario& sc, const SolverSettings& settings);

/// Gas is treated as present when S_g exceeds this tolerance (event logic).
inline constexpr double gas_presence_tol = 1e-8;

} // namespace hydromig

#endif
