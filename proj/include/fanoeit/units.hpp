#pragma once

#include <numbers>

// Atomic units: hbar = 1, 4 pi eps0 = 1.
namespace fanoeit::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.0;
inline constexpr double eps0 = 1.0 / (4.0 * pi);

inline constexpr double bohr_radius_cm = 5.29177210903e-9;

constexpr double density_from_per_cm3(double n_per_cm3) {
    return n_per_cm3 * bohr_radius_cm * bohr_radius_cm * bohr_radius_cm;
}

// 0.33e12 cm^-3, the default vapour density.
inline constexpr double default_density = density_from_per_cm3(0.33e12);

inline constexpr double default_Gamma = 1e-9;

}  // namespace fanoeit::units
