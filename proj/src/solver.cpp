#include "hydromig/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hydromig/log.hpp"

namespace hydromig {

void SolverSettings::validate() const
{
    if (!(tol_r_w > 0.0 && tol_r_h > 0.0 && tol_update > 0.0))
        throw std::invalid_argument("solver settings: tolerances must be positive");
    if (!(dt_growth > 1.0 && dt_cut > 0.0 && dt_cut < 1.0))
        throw std::invalid_argument("solver settings: need dt_growth > 1 > dt_cut > 0");
    if (max_newton < 1 || max_dt_cuts < 1 || grow_iters < 0)
        throw std::invalid_argument("solver settings: bad iteration limits");
    if (!(p_scale > 0.0) || r_scale < 0.0)
        throw std::invalid_argument("solver settings: bad unknown scaling");
}

namespace {

struct Scaling {
    std::vector<double> row;  // per equation: V phi rho_ref / dt
    std::vector<double> col;  // per unknown: p_scale / r_scale
};

Scaling make_scaling(const Scenario& sc, double dt, const SolverSettings& st)
{
    const int n = sc.mesh.n_cells;
    const double r_scale = st.r_scale > 0.0 ? st.r_scale : sc.fluid.C_h * 1e6;
    Scaling s;
    s.row.resize(2 * static_cast<std::size_t>(n));
    s.col.resize(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double pore = sc.mesh.widths[i] * sc.mesh.cross_section * sc.rock_of(i).phi;
        s.row[2 * i] = pore * sc.fluid.rho_w_std / dt;
        s.row[2 * i + 1] = pore * r_scale / dt;
        s.col[2 * i] = st.p_scale;
        s.col[2 * i + 1] = r_scale;
    }
    return s;
}

/// Scaled max norms of the two equations' residuals.
std::pair<double, double> residual_norms(std::span<const double> R, const Scaling& s)
{
    double rw = 0.0, rh = 0.0;
    for (std::size_t i = 0; i < R.size(); i += 2) {
        rw = std::max(rw, std::fabs(R[i]) / s.row[i]);
        rh = std::max(rh, std::fabs(R[i + 1]) / s.row[i + 1]);
    }
    return {rw, rh};
}

void assemble(bool parallel, std::span<const double> u_old, std::span<const double> u_new,
              double dt, const Scenario& sc, std::span<double> R, std::span<FaceFlux> faces)
{
    if (parallel)
        assemble_residual(u_old, u_new, dt, sc, R, faces);
    else
        assemble_residual_serial(u_old, u_new, dt, sc, R, faces);
}

} // namespace

std::optional<StateVector> newton_step(const StateVector& u_old, const StateVector& guess,
                                       double dt, const Scenario& sc,
                                       const SolverSettings& st, NewtonStats& stats)
{
    const int n = sc.mesh.n_cells;
    const int N = 2 * n;
    stats = NewtonStats{};

    const Scaling scale = make_scaling(sc, dt, st);

    StateVector u = guess;
    std::vector<double> R(N);
    std::vector<FaceFlux> faces(static_cast<std::size_t>(n) + 1);
    assemble(st.parallel, u_old, u, dt, sc, R, faces);
    auto [rw, rh] = residual_norms(R, scale);
    stats.res_w = rw;
    stats.res_h = rh;
    if (rw <= st.tol_r_w && rh <= st.tol_r_h) {
        stats.converged = true;
        return u;
    }

    BandedMatrix J(N, 3, 3);
    std::vector<double> rhs(N);
    StateVector u_try(N);
    std::vector<double> R_try(N);

    for (int it = 1; it <= st.max_newton; ++it) {
        if (st.parallel)
            assemble_jacobian(u_old, u, dt, sc, J);
        else
            assemble_jacobian_serial(u_old, u, dt, sc, J);

        // scale rows and columns, pin exactly-zero rows (a fully saturated
        // closed cell leaves the water equation without any dependence; its
        // residual is zero there and the pressure update is pinned to zero)
        for (int i = 0; i < N; ++i) {
            bool all_zero = true;
            for (int j = std::max(0, i - 3); j <= std::min(N - 1, i + 3); ++j) {
                double& a = J.at(i, j);
                a *= scale.col[j] / scale.row[i];
                if (a != 0.0) all_zero = false;
            }
            if (all_zero) J.at(i, i) = 1.0;
            rhs[i] = -R[i] / scale.row[i];
        }

        BandedMatrix J_backup = J; // dgbsv overwrites; kept for the regularized retry
        std::vector<double> rhs_backup = rhs;
        bool ok = J.solve(rhs);
        double dmax = 0.0;
        if (ok)
            for (double v : rhs) {
                if (!std::isfinite(v)) { ok = false; break; }
                dmax = std::max(dmax, std::fabs(v));
            }
        if (!ok || dmax > 1e8) {
            // singular or wildly ill-conditioned system (pure-Neumann pressure
            // null space); retry with a small diagonal shift
            stats.regularized = true;
            J = J_backup;
            J.shift_diagonal(1e-8);
            rhs = rhs_backup;
            if (!J.solve(rhs)) return std::nullopt;
            for (double v : rhs)
                if (!std::isfinite(v)) return std::nullopt;
        }

        const double update_norm = [&] {
            double m = 0.0;
            for (double v : rhs) m = std::max(m, std::fabs(v));
            return m;
        }();

        // backtracking on the scaled residual max norm
        const double norm_cur = std::max(rw / st.tol_r_w, rh / st.tol_r_h);
        double alpha = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 6; ++bt, alpha *= 0.5) {
            for (int j = 0; j < N; ++j) u_try[j] = u[j] + alpha * rhs[j] * scale.col[j];
            for (int j = 1; j < N; j += 2)
                if (u_try[j] < 0.0) {
                    u_try[j] = 0.0;
                    stats.clipped = true;
                }
            assemble(st.parallel, u_old, u_try, dt, sc, R_try, faces);
            auto [rw_t, rh_t] = residual_norms(R_try, scale);
            if (std::max(rw_t / st.tol_r_w, rh_t / st.tol_r_h) < norm_cur) {
                rw = rw_t;
                rh = rh_t;
                accepted = true;
                break;
            }
        }
        if (!accepted) return std::nullopt;

        u.swap(u_try);
        R.swap(R_try);
        stats.iterations = it;
        stats.res_w = rw;
        stats.res_h = rh;
        if (rw <= st.tol_r_w && rh <= st.tol_r_h && alpha * update_norm <= st.tol_update) {
            stats.converged = true;
            return u;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// transient driver
// ---------------------------------------------------------------------------

namespace {

struct LedgerCums {
    double in_w = 0.0, in_h = 0.0, out_w = 0.0, out_h = 0.0;
    double mass_w0 = 0.0, mass_h0 = 0.0;
};

StepRecord make_record(const Scenario& sc, std::span<const double> u,
                       const std::vector<FaceFlux>& faces, double t, double dt, int iters,
                       const LedgerCums& cums, std::vector<SecondaryState>& sec_buf)
{
    const int n = sc.mesh.n_cells;
    const double area = sc.mesh.cross_section;
    StepRecord rec;
    rec.t = t;
    rec.dt = dt;
    rec.newton_iters = iters;

    sec_buf.resize(n);
    for (int i = 0; i < n; ++i)
        sec_buf[i] = secondary_state(cell_state(u, i), sc.rock_of(i), sc.fluid);

    rec.Sg_first_cell = sec_buf[0].S_g;
    for (int i = 0; i < n; ++i) {
        rec.max_Sg = std::max(rec.max_Sg, sec_buf[i].S_g);
        rec.max_pl = std::max(rec.max_pl, cell_state(u, i).p_l);
        if (sec_buf[i].S_g > 1e-4) rec.front_x = sc.mesh.centers[i];
        if (i + 1 < n)
            rec.max_adjacent_Sg_jump =
                std::max(rec.max_adjacent_Sg_jump, std::fabs(sec_buf[i + 1].S_g - sec_buf[i].S_g));
    }
    for (const FaceFlux& f : faces) {
        rec.max_abs_ql = std::max(rec.max_abs_ql, std::fabs(f.q_l));
        rec.max_abs_Fw = std::max(rec.max_abs_Fw, std::fabs(f.water) / area);
        rec.max_abs_Fh = std::max(rec.max_abs_Fh, std::fabs(f.hydrogen) / area);
    }

    // capillary-pressure continuity across rock interfaces, evaluated at the
    // face-interpolated state when both neighbor cells carry gas
    for (int f = 1; f < n; ++f) {
        const int il = f - 1, ir = f;
        if (sc.mesh.rock_of_cell[il] == sc.mesh.rock_of_cell[ir]) continue;
        if (sec_buf[il].S_g <= gas_presence_tol || sec_buf[ir].S_g <= gas_presence_tol) continue;
        const double dl = 0.5 * sc.mesh.widths[il], dr = 0.5 * sc.mesh.widths[ir];
        const CellState ul = cell_state(u, il), ur = cell_state(u, ir);
        const double w = dl / (dl + dr);
        const double p_face = ul.p_l + (ur.p_l - ul.p_l) * w;
        const double r_face = ul.rho_l_h + (ur.rho_l_h - ul.rho_l_h) * w;
        const double pi_face = r_face / sc.fluid.C_h - p_face;
        if (pi_face <= 0.0) continue;
        const RockParams& rl = sc.rock_of(il);
        const RockParams& rr = sc.rock_of(ir);
        const double Sg_l = capillary_inverse(pi_face, rl);
        const double Sg_r = capillary_inverse(pi_face, rr);
        const double mismatch = std::fabs(pc(Sg_l, rl) - pc(Sg_r, rr)) / rl.P_r;
        rec.iface_pc_mismatch = std::max(rec.iface_pc_mismatch, mismatch);
    }

    for (int i = 0; i < n; ++i) {
        const double pore = sc.mesh.widths[i] * area * sc.rock_of(i).phi;
        rec.mass_w += pore * sc.fluid.rho_w_std * sec_buf[i].S_l;
        rec.mass_h += pore * a_star(sec_buf[i].S_g, sc.fluid) * cell_state(u, i).rho_l_h;
    }
    rec.cum_in_w = cums.in_w;
    rec.cum_in_h = cums.in_h;
    rec.cum_out_w = cums.out_w;
    rec.cum_out_h = cums.out_h;
    rec.balance_w = (rec.mass_w - cums.mass_w0) - (cums.in_w - cums.out_w);
    rec.balance_h = (rec.mass_h - cums.mass_h0) - (cums.in_h - cums.out_h);
    return rec;
}

Snapshot make_snapshot(const Scenario& sc, std::span<const double> u,
                       const std::vector<FaceFlux>& faces, double t,
                       const std::vector<SecondaryState>& sec)
{
    Snapshot snap;
    snap.t = t;
    const int n = sc.mesh.n_cells;
    snap.states.resize(n);
    for (int i = 0; i < n; ++i) snap.states[i] = cell_state(u, i);
    snap.secondary = sec;
    snap.faces = faces;
    return snap;
}

void finalize_events_and_stationarity(SolveReport& rep, const SolverSettings& st,
                                      bool disappearance_active, double disappearance_start,
                                      double disappearance_last)
{
    if (disappearance_active)
        rep.events.gas_disappearance_intervals.push_back({disappearance_start, disappearance_last});

    double best = -std::numeric_limits<double>::infinity();
    for (const StepRecord& s : rep.steps)
        if (s.max_pl > best) {
            best = s.max_pl;
            rep.events.p_l_peak_t = s.t;
        }
    rep.events.p_l_peak_value = best;

    // stationarity: earliest time from which the water face fluxes stay below
    // the configured fraction of the run maximum
    double global = 0.0;
    for (const StepRecord& s : rep.steps) global = std::max(global, s.max_abs_Fw);
    rep.events.stationarity_t.reset();
    if (global == 0.0) {
        rep.events.stationarity_t = 0.0;
        return;
    }
    double suffix = 0.0;
    for (std::size_t i = rep.steps.size(); i-- > 0;) {
        suffix = std::max(suffix, rep.steps[i].max_abs_Fw);
        if (suffix <= st.stationary_flux_frac * global)
            rep.events.stationarity_t = rep.steps[i].t;
        else
            break;
    }
}

} // namespace

SolveReport run(const Scenario& sc, const SolverSettings& st)
{
    sc.validate();
    st.validate();

    SolveReport rep;
    rep.scenario = sc;

    const int n = sc.mesh.n_cells;
    StateVector u = initial_state_vector(sc);
    std::vector<FaceFlux> faces(static_cast<std::size_t>(n) + 1);
    std::vector<SecondaryState> sec;

    std::vector<double> snaps = sc.snapshot_times;
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());

    double t = 0.0;
    LedgerCums cums;

    if (st.parallel)
        compute_face_fluxes(u, sc, faces);
    else
        compute_face_fluxes_serial(u, sc, faces);
    {
        StepRecord rec0 = make_record(sc, u, faces, 0.0, 0.0, 0, cums, sec);
        cums.mass_w0 = rec0.mass_w;
        cums.mass_h0 = rec0.mass_h;
        rec0.balance_w = 0.0;
        rec0.balance_h = 0.0;
        rep.steps.push_back(rec0);
    }

    // event bookkeeping
    std::vector<char> ever_gas(n, 0);
    bool disappearance_active = false;
    double disappearance_start = 0.0, disappearance_last = 0.0;
    auto update_events = [&](double time) {
        bool present_gas = false;
        bool disappeared_now = false;
        for (int i = 0; i < n; ++i) {
            const bool gas = sec[i].S_g > gas_presence_tol;
            present_gas = present_gas || gas;
            if (!gas && ever_gas[i]) disappeared_now = true;
        }
        if (!rep.events.first_gas_appearance_t && present_gas)
            rep.events.first_gas_appearance_t = time;
        if (disappeared_now) {
            if (!disappearance_active) {
                disappearance_active = true;
                disappearance_start = time;
            }
            disappearance_last = time;
        } else if (disappearance_active) {
            rep.events.gas_disappearance_intervals.push_back({disappearance_start, disappearance_last});
            disappearance_active = false;
        }
        for (int i = 0; i < n; ++i)
            if (sec[i].S_g > gas_presence_tol) ever_gas[i] = 1;
    };
    update_events(0.0);

    std::size_t snap_idx = 0;
    while (snap_idx < snaps.size() && snaps[snap_idx] <= 0.0) {
        rep.snapshots.push_back(make_snapshot(sc, u, faces, 0.0, sec));
        ++snap_idx;
    }

    double dt_nominal = sc.dt_init;
    int consecutive_failures = 0;
    const double t_eps = 1e-12 * sc.t_end;

    while (t < sc.t_end - t_eps) {
        double next_stop = sc.t_end;
        if (snap_idx < snaps.size()) next_stop = std::min(next_stop, snaps[snap_idx]);
        double dt_try = std::min(dt_nominal, sc.dt_max);
        bool lands = false;
        if (dt_try >= next_stop - t) {
            dt_try = next_stop - t;
            lands = true;
        }

        NewtonStats stats;
        std::optional<StateVector> result = newton_step(u, u, dt_try, sc, st, stats);
        if (!result) {
            ++consecutive_failures;
            HYDROMIG_LOG_DEBUG("t=%.6g s: step dt=%.6g failed after %d iterations, cutting",
                               t, dt_try, stats.iterations);
            if (consecutive_failures > st.max_dt_cuts) {
                rep.abort_reason = "time step rejected " + std::to_string(consecutive_failures) +
                                   " times in a row at t = " + std::to_string(t) + " s";
                rep.final_state = u;
                finalize_events_and_stationarity(rep, st, disappearance_active,
                                                 disappearance_start, disappearance_last);
                return rep;
            }
            dt_nominal = std::max(dt_try * st.dt_cut, sc.dt_min);
            continue;
        }

        consecutive_failures = 0;
        u = std::move(*result);
        t = lands ? next_stop : t + dt_try;
        rep.total_newton_iterations += stats.iterations;

        if (st.parallel)
            compute_face_fluxes(u, sc, faces);
        else
            compute_face_fluxes_serial(u, sc, faces);
        cums.in_w += faces.front().water * dt_try;
        cums.in_h += faces.front().hydrogen * dt_try;
        cums.out_w += faces.back().water * dt_try;
        cums.out_h += faces.back().hydrogen * dt_try;

        rep.steps.push_back(make_record(sc, u, faces, t, dt_try, stats.iterations, cums, sec));
        update_events(t);

        while (snap_idx < snaps.size() && t == snaps[snap_idx]) {
            rep.snapshots.push_back(make_snapshot(sc, u, faces, t, sec));
            ++snap_idx;
        }

        if (stats.iterations <= st.grow_iters)
            dt_nominal = std::min(dt_nominal * st.dt_growth, sc.dt_max);
        HYDROMIG_LOG_DEBUG("accepted t=%.6g s dt=%.6g iters=%d max_Sg=%.3g",
                           t, dt_try, stats.iterations, rep.steps.back().max_Sg);
    }

    rep.completed = true;
    rep.final_state = u;
    finalize_events_and_stationarity(rep, st, disappearance_active, disappearance_start,
                                     disappearance_last);
    return rep;
}

} // namespace hydromig
