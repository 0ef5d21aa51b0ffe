#pragma once

namespace ocdr::constants {

// CODATA 2018 (all four are exact by definition since the SI redefinition)
inline constexpr double planck_h = 6.62607015e-34;          // J s
inline constexpr double speed_of_light = 2.99792458e8;      // m/s
inline constexpr double boltzmann_k = 1.380649e-23;         // J/K
inline constexpr double electron_charge = 1.602176634e-19;  // C

inline constexpr double speed_of_light_um = 2.99792458e14;  // um/s
inline constexpr double speed_of_light_nm = 2.99792458e17;  // nm/s

} // namespace ocdr::constants
