#pragma once

// Unit system: lengths in nm, times in fs, energies in eV, dipoles in e*nm,
// electron speed as a fraction of c.  hbar*c is the single embedded constant
// set; everything else is derived from it.

namespace sreels::constants {

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double hbar_c_ev_nm = 197.3269804;        // eV*nm (CODATA 2018)
inline constexpr double c_nm_per_fs = 299.792458;          // nm/fs
inline constexpr double hbar_ev_fs = hbar_c_ev_nm / c_nm_per_fs;  // 0.6582119...
inline constexpr double fine_structure = 7.2973525693e-3;  // dimensionless

}  // namespace sreels::constants
