#pragma once

#include <cmath>
#include <stdexcept>

// Physical constants and unit conversions. Everything downstream works in
// femtoseconds and angular frequencies (rad/fs); energies are carried as
// E/hbar. All unit handling is centralized here.

namespace rotsim {

namespace si {
inline constexpr double speed_of_light_m_s = 2.99792458e8;    // exact
inline constexpr double speed_of_light_cm_s = 2.99792458e10;  // exact
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double reduced_planck = 1.054571817e-34;        // J s
inline constexpr double planck = 6.62607015e-34;                 // J s, exact
inline constexpr double boltzmann = 1.380649e-23;                // J/K, exact
}  // namespace si

inline constexpr double pi = 3.14159265358979323846;

/// Level-spacing frequency B*c in Hz for B given in cm^-1.
inline double rotational_constant_hz(double b_cm1) {
  return b_cm1 * si::speed_of_light_cm_s;
}

/// Inverse of rotational_constant_hz.
inline double rotational_constant_cm1(double bc_hz) {
  return bc_hz / si::speed_of_light_cm_s;
}

/// B*c expressed per femtosecond (cycles/fs).
inline double rotational_constant_per_fs(double b_cm1) {
  return rotational_constant_hz(b_cm1) * 1e-15;
}

/// Rigid-rotor revival period 1/(2Bc) in fs.
inline double revival_period_fs(double b_cm1) {
  return 1.0 / (2.0 * rotational_constant_per_fs(b_cm1));
}

inline double intensity_wcm2_to_wm2(double i_wcm2) { return i_wcm2 * 1e4; }

/// Squared field amplitude E0^2 = 2 I / (eps0 c) in V^2/m^2.
inline double field_amplitude_squared(double intensity_w_m2) {
  if (intensity_w_m2 < 0.0)
    throw std::invalid_argument("field_amplitude_squared: negative intensity");
  return 2.0 * intensity_w_m2 /
         (si::vacuum_permittivity * si::speed_of_light_m_s);
}

/// Cycle-averaged induced-dipole well depth U = -(dalpha/4) E0^2 in joules.
/// dalpha is the polarizability anisotropy volume in Angstrom^3; the SI
/// anisotropy is 4 pi eps0 times that, so U = -2 pi dalpha I / c.
inline double interaction_energy(double delta_alpha_a3,
                                 double intensity_w_m2) {
  if (delta_alpha_a3 < 0.0)
    throw std::invalid_argument("interaction_energy: negative delta_alpha");
  if (intensity_w_m2 < 0.0)
    throw std::invalid_argument("interaction_energy: negative intensity");
  const double dalpha_m3 = delta_alpha_a3 * 1e-30;
  return -2.0 * pi * dalpha_m3 * intensity_w_m2 / si::speed_of_light_m_s;
}

/// Same well depth as a rate U/hbar in rad/fs.
inline double interaction_rate_rad_fs(double delta_alpha_a3,
                                      double intensity_w_m2) {
  return interaction_energy(delta_alpha_a3, intensity_w_m2) /
         si::reduced_planck * 1e-15;
}

}  // namespace rotsim
