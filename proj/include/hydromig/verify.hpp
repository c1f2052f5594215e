#ifndef HYDROMIG_VERIFY_HPP
#define HYDROMIG_VERIFY_HPP

#include <span>
#include <string>
#include <vector>

#include "hydromig/assembly.hpp"
#include "hydromig/scenario.hpp"

namespace hydromig {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_passed() const
    {
        for (const CheckResult& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

/// Phase-map suite: capillary inverse round trips, saturation monotonicity,
/// threshold continuity and the unilateral condition.
SuiteResult verify_phase();

/// Coefficient suite: threshold-continuity sweep, A22 positivity, degenerate
/// pressure limits, the accumulation bound and the cross-formulation flux
/// equivalence.
SuiteResult verify_coeffs();

/// Conservation suite: the saturated-region reduced-assembly oracle, the
/// Jacobian directional-derivative test, flux telescoping on closed domains
/// and a short closed-domain run with its mass ledger.
SuiteResult verify_conservation();

/// Residual of the liquid-saturated limit equations, coded directly from the
/// degenerate system (no gas phase, S_l = 1, a* = 1) and independent of the
/// main assembly path.  Used as an oracle; `sc` must describe states that are
/// liquid-saturated everywhere.
void reduced_saturated_residual(std::span<const double> u_old, std::span<const double> u_new,
                                double dt, const Scenario& sc, std::span<double> R);

} // namespace hydromig

#endif
