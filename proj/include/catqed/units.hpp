#pragma once

// Unit conventions: every energy in this codebase is stored as an angular
// frequency E/hbar in rad/s.  Temperatures stay in kelvin and are converted
// through kelvin_over_hbar where a rate is needed.

namespace catqed::units {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double h_planck = 6.62607015e-34;       // J s (exact)
inline constexpr double hbar = h_planck / (2.0 * pi);    // J s
inline constexpr double k_boltzmann = 1.380649e-23;      // J/K (exact)
inline constexpr double e_charge = 1.602176634e-19;      // C (exact)

// rad/s per eV, ueV, kelvin
inline constexpr double ev_over_hbar = e_charge / hbar;
inline constexpr double microev_over_hbar = 1e-6 * ev_over_hbar;
inline constexpr double kelvin_over_hbar = k_boltzmann / hbar;

}  // namespace catqed::units
