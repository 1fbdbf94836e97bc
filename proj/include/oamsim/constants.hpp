// Physical constants (CODATA 2018 exact values where defined).
#pragma once

namespace oamsim {

inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double mu0 = 1.25663706212e-6;       // N/A^2
inline constexpr double pi = 3.14159265358979323846;

} // namespace oamsim
