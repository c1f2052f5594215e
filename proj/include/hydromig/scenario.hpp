#ifndef HYDROMIG_SCENARIO_HPP
#define HYDROMIG_SCENARIO_HPP

#include <string>
#include <vector>

#include "hydromig/constitutive.hpp"
#include "hydromig/fluid.hpp"
#include "hydromig/units.hpp"

namespace hydromig {

/// Cell-centered quasi-1D mesh.  Cell edges are primary; centers and widths
/// are derived from them so that widths telescope to the domain length.
struct Mesh1D {
    int n_cells = 0;
    double length = 0.0;        ///< [m]
    double cross_section = 1.0; ///< flow area [m^2]
    std::vector<double> edges;   ///< n_cells + 1 positions [m]
    std::vector<double> centers; ///< [m]
    std::vector<double> widths;  ///< [m]
    std::vector<int> rock_of_cell;

    static Mesh1D uniform(double length, int n_cells, double cross_section);
};

/// One side of the domain: either imposed component mass fluxes (positive
/// into the domain) or imposed primary unknowns behind a ghost state.
struct BoundaryCondition {
    enum class Kind { neumann, dirichlet };
    Kind kind = Kind::neumann;
    double water_influx = 0.0;    ///< [kg/m^2/s], Neumann only
    double hydrogen_influx = 0.0; ///< [kg/m^2/s], Neumann only
    double p_l = 0.0;             ///< [Pa], Dirichlet only
    double rho_l_h = 0.0;         ///< [kg/m^3], Dirichlet only

    static BoundaryCondition neumann(double water_influx, double hydrogen_influx)
    {
        BoundaryCondition bc;
        bc.kind = Kind::neumann;
        bc.water_influx = water_influx;
        bc.hydrogen_influx = hydrogen_influx;
        return bc;
    }
    static BoundaryCondition no_flux() { return neumann(0.0, 0.0); }
    static BoundaryCondition dirichlet(double p_l, double rho_l_h)
    {
        BoundaryCondition bc;
        bc.kind = Kind::dirichlet;
        bc.p_l = p_l;
        bc.rho_l_h = rho_l_h;
        return bc;
    }
};

/// Complete description of one simulation: geometry, materials, boundary and
/// initial data and the time schedule.  Immutable after construction.
struct Scenario {
    std::string name;
    Mesh1D mesh;
    std::vector<RockParams> rocks;
    FluidParams fluid = FluidParams::water_hydrogen();
    BoundaryCondition bc_left, bc_right;
    std::vector<CellState> initial; ///< one state per cell
    double t_end = 0.0;   ///< [s]
    double dt_init = 0.0; ///< [s]
    double dt_min = 0.0;  ///< [s]
    double dt_max = 0.0;  ///< [s]
    std::vector<double> snapshot_times; ///< sorted, <= t_end [s]
    double gravity_x = 0.0; ///< acceleration component along the column [m/s^2]

    const RockParams& rock_of(int cell) const { return rocks[mesh.rock_of_cell[cell]]; }
    void validate() const; ///< throws std::invalid_argument on any broken invariant
};

/// Builds one of the four benchmark scenarios.  n_cells = 0 selects the
/// default resolution (200 cells for cases 1-3, 500 for case 4).
Scenario build_case(int id, int n_cells = 0);

/// Reads a scenario from the documented key-value config format.  Throws
/// std::runtime_error with a line reference on parse errors and
/// std::invalid_argument on physical-validation errors.
Scenario load_config(const std::string& path);

} // namespace hydromig

#endif
