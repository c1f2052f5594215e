#include <algorithm>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hydromig/log.hpp"
#include "hydromig/output.hpp"
#include "hydromig/scenario.hpp"
#include "hydromig/solver.hpp"
#include "hydromig/units.hpp"
#include "hydromig/verify.hpp"

namespace {

int run_simulate(int case_id, const std::string& config, int cells,
                 const std::vector<double>& snapshots, const std::string& out_dir,
                 double gravity, bool gravity_set, bool serial)
{
    using namespace hydromig;
    Scenario sc = config.empty() ? build_case(case_id, cells) : load_config(config);
    if (!snapshots.empty()) {
        sc.snapshot_times = snapshots;
        std::sort(sc.snapshot_times.begin(), sc.snapshot_times.end());
    }
    if (gravity_set) sc.gravity_x = gravity;
    sc.validate();

    SolverSettings settings;
    settings.parallel = !serial;

    HYDROMIG_LOG_INFO("simulating '%s' (%d cells) to t = %.6g s", sc.name.c_str(),
                      sc.mesh.n_cells, sc.t_end);
    SolveReport rep = run(sc, settings);
    write_run(rep, out_dir);

    HYDROMIG_LOG_INFO("%zu accepted steps, %d Newton iterations total", rep.steps.size() - 1,
                      rep.total_newton_iterations);
    if (rep.events.first_gas_appearance_t)
        HYDROMIG_LOG_INFO("first gas appearance at t = %.6g s (%.6g yr)",
                          *rep.events.first_gas_appearance_t,
                          seconds_to_years(*rep.events.first_gas_appearance_t));
    for (const auto& iv : rep.events.gas_disappearance_intervals)
        HYDROMIG_LOG_INFO("gas disappearance interval [%.6g, %.6g] yr",
                          seconds_to_years(iv[0]), seconds_to_years(iv[1]));
    HYDROMIG_LOG_INFO("liquid pressure peak %.6g Pa at t = %.6g yr", rep.events.p_l_peak_value,
                      seconds_to_years(rep.events.p_l_peak_t));
    if (rep.events.stationarity_t)
        HYDROMIG_LOG_INFO("stationary (water flux) from t = %.6g yr",
                          seconds_to_years(*rep.events.stationarity_t));
    HYDROMIG_LOG_INFO("outputs written to %s/", out_dir.c_str());

    if (!rep.completed) {
        HYDROMIG_LOG_ERROR("solver aborted: %s", rep.abort_reason.c_str());
        return 1;
    }
    return 0;
}

int run_verify(const std::string& suite)
{
    using namespace hydromig;
    SuiteResult result;
    if (suite == "phase")
        result = verify_phase();
    else if (suite == "coeffs")
        result = verify_coeffs();
    else
        result = verify_conservation();
    for (const CheckResult& c : result.checks)
        std::printf("[%s] %s: %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
    std::printf("suite '%s': %s\n", result.suite.c_str(),
                result.all_passed() ? "all checks passed" : "FAILURES");
    return result.all_passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-volume simulator for water/hydrogen two-phase flow in porous media"};
    app.require_subcommand(1);

    int case_id = 0;
    std::string config;
    int cells = 0;
    std::string snapshots_arg;
    std::string out_dir = "hydromig_out";
    double gravity = 0.0;
    bool serial = false;

    CLI::App* sim = app.add_subcommand("simulate", "run one scenario and write CSV/JSON outputs");
    CLI::Option* opt_case =
        sim->add_option("--case", case_id, "benchmark case id")->check(CLI::Range(1, 4));
    CLI::Option* opt_config =
        sim->add_option("--config", config, "scenario config file")->check(CLI::ExistingFile);
    sim->add_option("--cells", cells, "override cell count (with --case)")
        ->check(CLI::PositiveNumber);
    sim->add_option("--snapshots", snapshots_arg, "comma-separated snapshot times [s]");
    sim->add_option("--out", out_dir, "output directory");
    CLI::Option* opt_gravity =
        sim->add_option("--gravity", gravity, "gravity acceleration along x [m/s^2]");
    sim->add_flag("--serial", serial, "disable the OpenMP assembly kernels");

    std::string suite;
    CLI::App* ver = app.add_subcommand("verify", "run a property suite and print pass/fail");
    ver->add_option("--suite", suite, "phase | coeffs | conservation")
        ->required()
        ->check(CLI::IsMember({"phase", "coeffs", "conservation"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) {
            if ((case_id == 0) == config.empty()) {
                std::fprintf(stderr, "simulate: exactly one of --case or --config is required\n");
                return 2;
            }
            if (cells != 0 && opt_case->count() == 0) {
                std::fprintf(stderr, "simulate: --cells needs --case\n");
                return 2;
            }
            std::vector<double> snapshots;
            if (!snapshots_arg.empty()) {
                std::stringstream ss(snapshots_arg);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    try {
                        snapshots.push_back(std::stod(tok));
                    } catch (const std::exception&) {
                        std::fprintf(stderr, "simulate: bad snapshot time '%s'\n", tok.c_str());
                        return 2;
                    }
                }
            }
            return run_simulate(case_id, config, cells, snapshots, out_dir, gravity,
                                opt_gravity->count() > 0, serial);
        }
        return run_verify(suite);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
