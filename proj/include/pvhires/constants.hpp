#pragma once

namespace pvhires::constants {

inline constexpr double boltzmann = 1.38064852e-23;       // J/K
inline constexpr double electron_charge = 1.602176634e-19;  // C
inline constexpr double stefan_boltzmann = 5.67e-8;        // W/(m^2 K^4)
inline constexpr double t_stc = 298.15;                    // K
inline constexpr double e_stc = 1000.0;                    // W/m^2
inline constexpr double solar_constant = 1367.0;           // W/m^2
inline constexpr double zero_celsius = 273.15;             // K

}  // namespace pvhires::constants
