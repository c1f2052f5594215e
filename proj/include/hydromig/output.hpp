#ifndef HYDROMIG_OUTPUT_HPP
#define HYDROMIG_OUTPUT_HPP

#include <string>

#include "hydromig/solver.hpp"

namespace hydromig {

/// Writes one snapshot as CSV: header row then one row per cell, 17
/// significant digits, UNIX newlines.  Columns: t_s, t_yr, x_m, p_l_Pa,
/// rho_l_h_kg_m3, molar_density_mol_m3, S_g, p_g_Pa, rho_tot_kg_m3 and the
/// per-area component fluxes through the cell's left and right faces
/// [kg/m^2/s].  Every row is re-validated against the phase-map invariants
/// before it is emitted.
void write_snapshot_csv(const Snapshot& snap, const Scenario& sc, const std::string& path);

/// events.json with the four event fields, each in seconds and years.
void write_events_json(const SolveReport& rep, const std::string& path);

/// Per-step mass ledger CSV.
void write_mass_ledger_csv(const SolveReport& rep, const std::string& path);

/// Writes the whole run into `dir`: dir/snapshots/snapshot_NNN.csv,
/// dir/events.json and dir/mass_ledger.csv.  Creates directories as needed.
void write_run(const SolveReport& rep, const std::string& dir);

} // namespace hydromig

#endif
