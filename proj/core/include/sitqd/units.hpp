// units.hpp — Internal unit system and the handful of conversions the simulator needs
//
// Every module exchanges frequencies in rad/ps, times in ps and lengths in mm.
// Laboratory units (meV, eV, nm, K, m^-3) are converted once, at config parse time.

#pragma once

#include <numbers>

namespace sitqd::units {

inline constexpr double pi = std::numbers::pi;

inline constexpr double hbar_meV_ps = 0.658212;        // meV * ps
inline constexpr double boltzmann_meV_per_K = 0.08617333262;
inline constexpr double hc_eV_nm = 1239.84;            // eV * nm

// Normalization frequency used for dimensionless axes (gamma_n * tau, Delta / gamma_n).
inline constexpr double gamma_n = 1.0;                 // rad/ps

inline constexpr double nm_to_mm = 1e-6;
inline constexpr double per_m3_to_per_mm3 = 1e-9;

constexpr double energy_to_angular_frequency(double energy_meV) { return energy_meV / hbar_meV_ps; }
constexpr double angular_frequency_to_energy(double omega) { return omega * hbar_meV_ps; }

constexpr double thermal_energy(double temperature_K) { return boltzmann_meV_per_K * temperature_K; }

// hc / E. Throws std::domain_error for non-positive energy.
double transition_wavelength(double energy_eV);
double photon_energy(double wavelength_nm);

// Standard deviation of a Gaussian from its full width at half maximum.
double fwhm_to_sigma(double fwhm);
double sigma_to_fwhm(double sigma);

} // namespace sitqd::units
