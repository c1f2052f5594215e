#include "hydromig/assembly.hpp"

#include <cmath>

namespace hydromig {

StateVector initial_state_vector(const Scenario& sc)
{
    StateVector u(2 * static_cast<std::size_t>(sc.mesh.n_cells));
    for (int i = 0; i < sc.mesh.n_cells; ++i) {
        u[2 * static_cast<std::size_t>(i)] = sc.initial[i].p_l;
        u[2 * static_cast<std::size_t>(i) + 1] = sc.initial[i].rho_l_h;
    }
    return u;
}

namespace {

/// Gas-phase potential used in the face flux: rho_l_h / C_h.  In the
/// two-phase region this equals the capillary-law pressure p_l + p_c(S_g)
/// identically (Henry equilibrium holds on the threshold manifold), and it
/// continues into the liquid-saturated region as the hypothetical
/// equilibrium pressure, the same convention the phase map reports.  The
/// hydrogen equation of the (p_l, rho_l_h) formulation carries exactly this
/// potential (its gas flux is lambda_g (C_v/C_h^2) rho_l_h grad rho_l_h),
/// and at a front face the Henry deficit of the saturated side is the force
/// that lets the gas invade it.  The upwinded mobility vanishes on saturated
/// cells, so no gas ever flows out of a one-phase region; as a bonus the
/// potential is globally smooth in the unknowns.
struct PhasePoint {
    double S_l;
    double p_g;
    double rho_l;    // rho_w + rho_l_h
    double lambda_l;
    double lambda_g;
};

PhasePoint phase_point(const CellState& u, const RockParams& rock, const FluidParams& fluid)
{
    PhasePoint p{};
    const double S_g = saturation_from_state(u, rock, fluid);
    p.S_l = 1.0 - S_g;
    p.p_g = u.rho_l_h / fluid.C_h;
    p.rho_l = fluid.rho_w_std + u.rho_l_h;
    const Mobilities mob = mobilities(p.S_l, rock, fluid);
    p.lambda_l = mob.lambda_l;
    p.lambda_g = mob.lambda_g;
    return p;
}

} // namespace

FaceFlux face_flux(const CellState& left, const CellState& right,
                   const RockParams& rock_left, const RockParams& rock_right,
                   const FaceGeom& geom, const FluidParams& fluid, double gravity_x)
{
    const double d = geom.d_left + geom.d_right;
    const double k_face = d / (geom.d_left / rock_left.k + geom.d_right / rock_right.k);

    const PhasePoint L = phase_point(left, rock_left, fluid);
    const PhasePoint R = phase_point(right, rock_right, fluid);

    FaceFlux f;

    // liquid phase
    {
        const double rho_avg = 0.5 * (L.rho_l + R.rho_l);
        const double probe = (left.p_l - right.p_l) + rho_avg * gravity_x * d;
        const bool up_left = probe >= 0.0;
        const double rho_up = up_left ? L.rho_l : R.rho_l;
        const double drive = (left.p_l - right.p_l) + rho_up * gravity_x * d;
        const double lam_up = up_left ? L.lambda_l : R.lambda_l;
        f.q_l = k_face * lam_up * drive / d;

        const double r_up = up_left ? left.rho_l_h : right.rho_l_h;
        f.water = fluid.rho_w_std * f.q_l;
        f.hydrogen = r_up * f.q_l;
    }

    // gas phase
    {
        const double rho_avg = 0.5 * fluid.C_v * (L.p_g + R.p_g);
        const double probe = (L.p_g - R.p_g) + rho_avg * gravity_x * d;
        const bool up_left = probe >= 0.0;
        const double rho_up = fluid.C_v * (up_left ? L.p_g : R.p_g);
        const double drive = (L.p_g - R.p_g) + rho_up * gravity_x * d;
        const double lam_up = up_left ? L.lambda_g : R.lambda_g;
        f.q_g = k_face * lam_up * drive / d;
        f.hydrogen += rho_up * f.q_g;
    }

    // dissolved-hydrogen diffusion
    {
        const double S_l_bar = 0.5 * (L.S_l + R.S_l);
        const double c_left = rock_left.phi * S_l_bar * fluid.D;
        const double c_right = rock_right.phi * S_l_bar * fluid.D;
        double c_face = 0.0;
        if (c_left > 0.0 && c_right > 0.0)
            c_face = d / (geom.d_left / c_left + geom.d_right / c_right);
        const double j = c_face * (left.rho_l_h - right.rho_l_h) / d;
        f.hydrogen += j;
        f.water -= j;
    }

    f.water *= geom.area;
    f.hydrogen *= geom.area;
    return f;
}

FaceFlux boundary_flux(const BoundaryCondition& bc, bool left_side,
                       const CellState& cell, const RockParams& rock,
                       double half_width, double area, const FluidParams& fluid,
                       double gravity_x)
{
    if (bc.kind == BoundaryCondition::Kind::neumann) {
        FaceFlux f;
        const double sign = left_side ? 1.0 : -1.0; // influx > 0 points +x on the left side
        f.water = sign * bc.water_influx * area;
        f.hydrogen = sign * bc.hydrogen_influx * area;
        return f;
    }
    const CellState ghost{bc.p_l, bc.rho_l_h};
    if (left_side) {
        const FaceGeom geom{area, 0.0, half_width};
        return face_flux(ghost, cell, rock, rock, geom, fluid, gravity_x);
    }
    const FaceGeom geom{area, half_width, 0.0};
    return face_flux(cell, ghost, rock, rock, geom, fluid, gravity_x);
}

namespace {

FaceFlux face_flux_at(std::span<const double> u, const Scenario& sc, int face)
{
    const Mesh1D& mesh = sc.mesh;
    const int n = mesh.n_cells;
    const double area = mesh.cross_section;
    if (face == 0)
        return boundary_flux(sc.bc_left, true, cell_state(u, 0), sc.rock_of(0),
                             0.5 * mesh.widths[0], area, sc.fluid, sc.gravity_x);
    if (face == n)
        return boundary_flux(sc.bc_right, false, cell_state(u, n - 1), sc.rock_of(n - 1),
                             0.5 * mesh.widths[n - 1], area, sc.fluid, sc.gravity_x);
    const int il = face - 1, ir = face;
    const FaceGeom geom{area, 0.5 * mesh.widths[il], 0.5 * mesh.widths[ir]};
    return face_flux(cell_state(u, il), cell_state(u, ir), sc.rock_of(il), sc.rock_of(ir),
                     geom, sc.fluid, sc.gravity_x);
}

/// Accumulated densities under the time derivatives, premultiplied by V:
/// water:    -phi rho_w S_g V     (difference gives phi rho_w (S_l_new - S_l_old) V)
/// hydrogen:  phi a*(S_g) rho_l_h V
struct AccTerm {
    double water;
    double hydrogen;
};

AccTerm acc_term(const CellState& u, const RockParams& rock, const FluidParams& fluid,
                 double volume)
{
    const double S_g = saturation_from_state(u, rock, fluid);
    AccTerm a;
    a.water = -rock.phi * fluid.rho_w_std * S_g * volume;
    a.hydrogen = rock.phi * a_star(S_g, fluid) * u.rho_l_h * volume;
    return a;
}

template <bool Parallel>
void face_fluxes_impl(std::span<const double> u, const Scenario& sc, std::span<FaceFlux> faces)
{
    const int n_faces = sc.mesh.n_cells + 1;
#pragma omp parallel for schedule(static) if (Parallel)
    for (int f = 0; f < n_faces; ++f)
        faces[f] = face_flux_at(u, sc, f);
}

constexpr int f_left(int cell) { return cell; }
constexpr int f_right(int cell) { return cell + 1; }

template <bool Parallel>
void residual_impl(std::span<const double> u_old, std::span<const double> u_new, double dt,
                   const Scenario& sc, std::span<double> R, std::span<FaceFlux> faces)
{
    const int n = sc.mesh.n_cells;
    face_fluxes_impl<Parallel>(u_new, sc, faces);
#pragma omp parallel for schedule(static) if (Parallel)
    for (int i = 0; i < n; ++i) {
        const double volume = sc.mesh.widths[i] * sc.mesh.cross_section;
        const RockParams& rock = sc.rock_of(i);
        const AccTerm a_new = acc_term(cell_state(u_new, i), rock, sc.fluid, volume);
        const AccTerm a_old = acc_term(cell_state(u_old, i), rock, sc.fluid, volume);
        R[2 * static_cast<std::size_t>(i)] =
            (a_new.water - a_old.water) / dt + faces[f_right(i)].water - faces[f_left(i)].water;
        R[2 * static_cast<std::size_t>(i) + 1] =
            (a_new.hydrogen - a_old.hydrogen) / dt + faces[f_right(i)].hydrogen -
            faces[f_left(i)].hydrogen;
    }
}

/// Finite-difference step for one unknown; flips sign instead of crossing the
/// phase threshold so the difference stays one-sided at the kink.  States
/// lying exactly on the threshold are differenced into the two-phase branch
/// for both variables (a consistent generalized derivative there).
double fd_step(const CellState& u, int var, const FluidParams& fluid)
{
    constexpr double rel = 1e-7;
    const double pi = u.rho_l_h / fluid.C_h - u.p_l;
    if (var == 0) {
        double h = rel * std::max(std::fabs(u.p_l), 1e3);
        if (pi >= 0.0 && pi - h <= 0.0) h = -h;
        return h;
    }
    double h = rel * std::max(u.rho_l_h, fluid.C_h * 1e3);
    if (pi < 0.0 && pi + h / fluid.C_h >= 0.0) h = -h;
    return h;
}

template <bool Parallel>
void jacobian_impl(std::span<const double> u_old, std::span<const double> u_new, double dt,
                   const Scenario& sc, BandedMatrix& J)
{
    const int n = sc.mesh.n_cells;
    J.set_zero();

    // base faces and accumulation terms
    std::vector<FaceFlux> faces(static_cast<std::size_t>(n) + 1);
    face_fluxes_impl<Parallel>(u_new, sc, faces);
    std::vector<AccTerm> acc(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (Parallel)
    for (int i = 0; i < n; ++i)
        acc[i] = acc_term(cell_state(u_new, i), sc.rock_of(i), sc.fluid,
                          sc.mesh.widths[i] * sc.mesh.cross_section);

    // one column pair per cell; every write lands in a distinct band slot
#pragma omp parallel if (Parallel)
    {
        std::vector<double> u_pert(u_new.begin(), u_new.end());
#pragma omp for schedule(static)
    for (int j = 0; j < n; ++j) {
        const double volume = sc.mesh.widths[j] * sc.mesh.cross_section;
        const RockParams& rock = sc.rock_of(j);
        for (int var = 0; var < 2; ++var) {
            const int col = 2 * j + var;
            const double h = fd_step(cell_state(u_new, j), var, sc.fluid);
            const double base = u_new[col];
            u_pert[col] = base + h;
            const double h_actual = u_pert[col] - base;

            const FaceFlux fl = face_flux_at(u_pert, sc, f_left(j));
            const FaceFlux fr = face_flux_at(u_pert, sc, f_right(j));
            const AccTerm ap = acc_term(cell_state(u_pert, j), rock, sc.fluid, volume);

            const double dFl_w = (fl.water - faces[f_left(j)].water) / h_actual;
            const double dFl_h = (fl.hydrogen - faces[f_left(j)].hydrogen) / h_actual;
            const double dFr_w = (fr.water - faces[f_right(j)].water) / h_actual;
            const double dFr_h = (fr.hydrogen - faces[f_right(j)].hydrogen) / h_actual;
            const double dacc_w = (ap.water - acc[j].water) / (dt * h_actual);
            const double dacc_h = (ap.hydrogen - acc[j].hydrogen) / (dt * h_actual);

            if (j > 0) {
                J.at(2 * (j - 1), col) = dFl_w;
                J.at(2 * (j - 1) + 1, col) = dFl_h;
            }
            J.at(2 * j, col) = dacc_w + dFr_w - dFl_w;
            J.at(2 * j + 1, col) = dacc_h + dFr_h - dFl_h;
            if (j + 1 < n) {
                J.at(2 * (j + 1), col) = -dFr_w;
                J.at(2 * (j + 1) + 1, col) = -dFr_h;
            }

            u_pert[col] = base;
        }
    }
    } // omp parallel
}

} // namespace

void compute_face_fluxes_serial(std::span<const double> u, const Scenario& sc,
                                std::span<FaceFlux> faces)
{
    face_fluxes_impl<false>(u, sc, faces);
}

void compute_face_fluxes(std::span<const double> u, const Scenario& sc, std::span<FaceFlux> faces)
{
    face_fluxes_impl<true>(u, sc, faces);
}

void assemble_residual_serial(std::span<const double> u_old, std::span<const double> u_new,
                              double dt, const Scenario& sc, std::span<double> R,
                              std::span<FaceFlux> faces)
{
    residual_impl<false>(u_old, u_new, dt, sc, R, faces);
}

void assemble_residual(std::span<const double> u_old, std::span<const double> u_new, double dt,
                       const Scenario& sc, std::span<double> R, std::span<FaceFlux> faces)
{
    residual_impl<true>(u_old, u_new, dt, sc, R, faces);
}

void assemble_jacobian_serial(std::span<const double> u_old, std::span<const double> u_new,
                              double dt, const Scenario& sc, BandedMatrix& J)
{
    jacobian_impl<false>(u_old, u_new, dt, sc, J);
}

void assemble_jacobian(std::span<const double> u_old, std::span<const double> u_new, double dt,
                       const Scenario& sc, BandedMatrix& J)
{
    jacobian_impl<true>(u_old, u_new, dt, sc, J);
}

} // namespace hydromig
