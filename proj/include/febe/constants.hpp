#pragma once

#include <numbers>

// CODATA 2018 values, SI units. The first four are exact by definition of the SI.
//
//   c            299 792 458             m/s
//   hbar         1.054 571 817e-34       J s
//   e            1.602 176 634e-19       C
//   m_e          9.109 383 7015e-31      kg
//   eps0         8.854 187 8128e-12      F/m
//   m_e c^2      510 998.950 00          eV
namespace febe::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double speed_of_light = 299792458.0;
inline constexpr double planck_reduced = 1.054571817e-34;
inline constexpr double elementary_charge = 1.602176634e-19;
inline constexpr double electron_mass = 9.1093837015e-31;
inline constexpr double vacuum_permittivity = 8.8541878128e-12;
inline constexpr double electron_rest_energy_ev = 510998.95000;

inline constexpr double joule_per_ev = elementary_charge;

}  // namespace febe::constants

namespace febe::units {

inline constexpr double nm = 1e-9;
inline constexpr double mm = 1e-3;
inline constexpr double ns = 1e-9;
inline constexpr double mrad = 1e-3;
inline constexpr double kev = 1e3;  // in eV
inline constexpr double ma = 1e-3;

/// Angular frequency (rad/s) of light with the given vacuum wavelength (m).
inline constexpr double angular_frequency_from_wavelength(double wavelength) {
  return 2.0 * constants::pi * constants::speed_of_light / wavelength;
}

}  // namespace febe::units
