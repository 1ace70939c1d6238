#pragma once

namespace ermc {

// Stefan-Boltzmann constant [W m^-2 K^-4]
inline constexpr double kSigma = 5.670374419e-8;

// Planck radiation constants: 2hc^2 [W m^2 sr^-1] and hc/kB [m K]
inline constexpr double kPlanckC1 = 1.1910429723971884e-16;
inline constexpr double kPlanckC2 = 1.4387768775039337e-2;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace ermc
