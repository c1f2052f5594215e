#ifndef HYDROMIG_UNITS_HPP
#define HYDROMIG_UNITS_HPP

namespace hydromig {

/// Universal gas constant [J/(mol K)].
inline constexpr double gas_constant = 8.314;

/// Fixed year convention used everywhere fluxes or times are given in years:
/// 1 year = 365 days = 3.1536e7 s.
inline constexpr double seconds_per_year = 3.1536e7;

/// Converts an injection rate given in mg/m^2/year to kg/m^2/s.
inline constexpr double flux_from_mg_per_m2_yr(double value)
{
    return value * 1e-6 / seconds_per_year;
}

inline constexpr double years_to_seconds(double years) { return years * seconds_per_year; }
inline constexpr double seconds_to_years(double seconds) { return seconds / seconds_per_year; }

} // namespace hydromig

#endif
