#include "hydromig/output.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hydromig/units.hpp"

namespace hydromig {

namespace {

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_row(const CellState& u, const SecondaryState& s, const FluidParams& fluid,
               const std::string& path, int cell)
{
    const auto bad = [&](const char* what) {
        throw std::runtime_error(path + ": refusing to write row " + std::to_string(cell) +
                                 ": " + what);
    };
    if (!(std::isfinite(u.p_l) && std::isfinite(u.rho_l_h) && std::isfinite(s.S_g) &&
          std::isfinite(s.p_g) && std::isfinite(s.rho_tot)))
        bad("non-finite value");
    if (s.S_g < 0.0 || s.S_g > 1.0) bad("S_g outside [0,1]");
    const double slack = 1e-12 * (1.0 + std::fabs(fluid.C_h * s.p_g));
    if (std::fabs(unilateral_residual(u, s, fluid)) > slack)
        bad("unilateral condition violated");
    if (s.S_g == 0.0 && u.rho_l_h > fluid.C_h * s.p_g + slack)
        bad("saturated state above the concentration threshold");
}

} // namespace

void write_snapshot_csv(const Snapshot& snap, const Scenario& sc, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "t_s,t_yr,x_m,p_l_Pa,rho_l_h_kg_m3,molar_density_mol_m3,S_g,p_g_Pa,rho_tot_kg_m3,"
           "F_w_left_kg_m2_s,F_h_left_kg_m2_s,F_w_right_kg_m2_s,F_h_right_kg_m2_s\n";
    const double area = sc.mesh.cross_section;
    for (int i = 0; i < sc.mesh.n_cells; ++i) {
        const CellState& u = snap.states[i];
        const SecondaryState& s = snap.secondary[i];
        check_row(u, s, sc.fluid, path, i);
        out << fmt17(snap.t) << ',' << fmt17(seconds_to_years(snap.t)) << ','
            << fmt17(sc.mesh.centers[i]) << ',' << fmt17(u.p_l) << ',' << fmt17(u.rho_l_h) << ','
            << fmt17(u.rho_l_h / sc.fluid.M_h) << ',' << fmt17(s.S_g) << ',' << fmt17(s.p_g)
            << ',' << fmt17(s.rho_tot) << ',' << fmt17(snap.faces[i].water / area) << ','
            << fmt17(snap.faces[i].hydrogen / area) << ','
            << fmt17(snap.faces[i + 1].water / area) << ','
            << fmt17(snap.faces[i + 1].hydrogen / area) << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_events_json(const SolveReport& rep, const std::string& path)
{
    using nlohmann::json;
    json j;
    const auto time_pair = [](double t_s) {
        return json{{"t_s", t_s}, {"t_yr", seconds_to_years(t_s)}};
    };
    j["first_gas_appearance"] =
        rep.events.first_gas_appearance_t ? time_pair(*rep.events.first_gas_appearance_t)
                                          : json(nullptr);
    json intervals = json::array();
    for (const auto& iv : rep.events.gas_disappearance_intervals)
        intervals.push_back({{"start_s", iv[0]},
                             {"end_s", iv[1]},
                             {"start_yr", seconds_to_years(iv[0])},
                             {"end_yr", seconds_to_years(iv[1])}});
    j["gas_disappearance_intervals"] = intervals;
    j["p_l_peak"] = {{"t_s", rep.events.p_l_peak_t},
                     {"t_yr", seconds_to_years(rep.events.p_l_peak_t)},
                     {"p_l_Pa", rep.events.p_l_peak_value}};
    j["stationarity"] =
        rep.events.stationarity_t ? time_pair(*rep.events.stationarity_t) : json(nullptr);
    j["completed"] = rep.completed;
    if (!rep.completed) j["abort_reason"] = rep.abort_reason;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_mass_ledger_csv(const SolveReport& rep, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "t_s,t_yr,dt_s,newton_iters,mass_w_kg,mass_h_kg,cum_in_w_kg,cum_out_w_kg,"
           "cum_in_h_kg,cum_out_h_kg,balance_w_kg,balance_h_kg\n";
    for (const StepRecord& s : rep.steps) {
        out << fmt17(s.t) << ',' << fmt17(seconds_to_years(s.t)) << ',' << fmt17(s.dt) << ','
            << s.newton_iters << ',' << fmt17(s.mass_w) << ',' << fmt17(s.mass_h) << ','
            << fmt17(s.cum_in_w) << ',' << fmt17(s.cum_out_w) << ',' << fmt17(s.cum_in_h) << ','
            << fmt17(s.cum_out_h) << ',' << fmt17(s.balance_w) << ',' << fmt17(s.balance_h)
            << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_run(const SolveReport& rep, const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(dir) / "snapshots");
    for (std::size_t i = 0; i < rep.snapshots.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
        write_snapshot_csv(rep.snapshots[i], rep.scenario, (fs::path(dir) / "snapshots" / name).string());
    }
    write_events_json(rep, (fs::path(dir) / "events.json").string());
    write_mass_ledger_csv(rep, (fs::path(dir) / "mass_ledger.csv").string());
}

} // namespace hydromig
