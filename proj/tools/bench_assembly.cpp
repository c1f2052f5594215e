// Benchmark of the OpenMP assembly kernels against the serial reference.
// Times face-flux evaluation, residual assembly and the finite-difference
// Jacobian on synthetic meshes and checks that both paths agree bitwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include <omp.h>

#include "hydromig/assembly.hpp"
#include "hydromig/banded.hpp"
#include "hydromig/scenario.hpp"

using namespace hydromig;

namespace {

Scenario synthetic_scenario(int n_cells)
{
    Scenario sc = build_case(3, n_cells); // heterogeneous, exercises both rocks
    return sc;
}

/// Mixed saturated/unsaturated state with smooth variation.
StateVector synthetic_state(const Scenario& sc)
{
    const int n = sc.mesh.n_cells;
    StateVector u(2 * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = sc.mesh.centers[i] / sc.mesh.length;
        const double p = 1e6 * (1.0 + 0.4 * std::sin(6.28 * x));
        const double S_g = x < 0.5 ? 0.25 * (1.0 - std::cos(6.28 * x)) * 0.2 : 0.0;
        double r;
        if (S_g > 0.0)
            r = sc.fluid.C_h * (p + pc(S_g, sc.rock_of(i)));
        else
            r = 0.5 * sc.fluid.C_h * p;
        u[2 * i] = p;
        u[2 * i + 1] = r;
    }
    return u;
}

template <class F>
double time_best_of(int reps, F&& body)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        body();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

bool bitwise_equal(std::span<const double> a, std::span<const double> b)
{
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

int main(int argc, char** argv)
{
    std::vector<int> sizes = {10000, 100000, 400000};
    if (argc > 1) {
        sizes.clear();
        for (int i = 1; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
    }

    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%10s %12s %12s %12s %12s %8s\n", "cells", "kernel", "serial [s]",
                "openmp [s]", "speedup", "equal");

    for (int n : sizes) {
        const Scenario sc = synthetic_scenario(n);
        const StateVector u_new = synthetic_state(sc);
        StateVector u_old = u_new;
        for (int i = 0; i < n; ++i) u_old[2 * i + 1] *= 0.97;
        const double dt = 1e9;

        std::vector<FaceFlux> faces_s(n + 1), faces_p(n + 1);
        std::vector<double> R_s(2 * n), R_p(2 * n);

        const double t_face_s =
            time_best_of(3, [&] { compute_face_fluxes_serial(u_new, sc, faces_s); });
        const double t_face_p = time_best_of(3, [&] { compute_face_fluxes(u_new, sc, faces_p); });
        bool eq = true;
        for (int f = 0; f <= n; ++f)
            eq = eq && faces_s[f].water == faces_p[f].water &&
                 faces_s[f].hydrogen == faces_p[f].hydrogen;
        std::printf("%10d %12s %12.4g %12.4g %12.2f %8s\n", n, "faces", t_face_s, t_face_p,
                    t_face_s / t_face_p, eq ? "yes" : "NO");

        const double t_res_s = time_best_of(
            3, [&] { assemble_residual_serial(u_old, u_new, dt, sc, R_s, faces_s); });
        const double t_res_p =
            time_best_of(3, [&] { assemble_residual(u_old, u_new, dt, sc, R_p, faces_p); });
        std::printf("%10d %12s %12.4g %12.4g %12.2f %8s\n", n, "residual", t_res_s, t_res_p,
                    t_res_s / t_res_p, bitwise_equal(R_s, R_p) ? "yes" : "NO");

        BandedMatrix J_s(2 * n, 3, 3), J_p(2 * n, 3, 3);
        const double t_jac_s =
            time_best_of(3, [&] { assemble_jacobian_serial(u_old, u_new, dt, sc, J_s); });
        const double t_jac_p =
            time_best_of(3, [&] { assemble_jacobian(u_old, u_new, dt, sc, J_p); });
        eq = true;
        for (int i = 0; i < 2 * n && eq; ++i)
            for (int j = std::max(0, i - 3); j <= std::min(2 * n - 1, i + 3); ++j)
                if (J_s.at(i, j) != J_p.at(i, j)) {
                    eq = false;
                    break;
                }
        std::printf("%10d %12s %12.4g %12.4g %12.2f %8s\n", n, "jacobian", t_jac_s, t_jac_p,
                    t_jac_s / t_jac_p, eq ? "yes" : "NO");
    }
    return 0;
}
