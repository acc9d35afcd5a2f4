// analysis.hpp — Pulse observables, area-theorem oracle and single-slice scans

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace sitqd {

using Complex = std::complex<double>;
struct SimConfig;

// modulus integrates |Omega|; signed_real integrates Re Omega and keeps the sign of 0-pi pulses.
enum class AreaConvention { modulus, signed_real };

std::string_view to_string(AreaConvention convention) noexcept;
AreaConvention area_convention_from_string(std::string_view name);

// Trapezoid integral over a uniformly sampled row.
double pulse_area(std::span<const Complex> row, double tau_step,
                  AreaConvention convention = AreaConvention::modulus);

// Branch-continuous solution of d Theta/dz = -(alpha/2) sin Theta:
//   Theta(z) = 2 (n pi + atan(tan(theta0/2 - n pi) e^{-alpha z / 2})),  n = round(theta0 / 2 pi).
// Throws std::domain_error when theta0 is an odd multiple of pi (an unstable fixed point).
double area_theorem_solution(double theta0, double alpha, double z);

// alpha = 2 pi eta g(0), in 1/mm.
double extinction_coefficient(double eta, double g_at_center);

// pi eta g(0) <B>: the alpha that the simulated medium realizes in d Theta/dz = -(alpha/2) sin Theta,
// so tan(Theta/2) decays as exp(-alpha z / 2) and a weak field as the same exponential.
double beer_extinction(double eta, double g_at_center, double mean_B);

// alpha L tau0 / 4, in ps.
double delay_estimate(double alpha, double length, double tau0);

struct PulseMetrics {
    double area{0.0};        // modulus area, rad
    double peak_value{0.0};  // rad/ps
    double peak_time{0.0};   // ps, from the start of the row
    double fwhm{0.0};        // ps, of the global peak
    std::size_t peak_count{0};
    std::vector<double> peak_times;
    std::vector<double> sub_pulse_areas;
};

inline constexpr double default_breakup_threshold = 0.05;

// Local maxima of |Omega| above threshold_fraction * global peak; sub-pulse areas are split at
// the minima between consecutive peaks. Throws std::invalid_argument unless 0 < fraction < 1.
PulseMetrics detect_peaks(std::span<const Complex> row, double tau_step,
                          double threshold_fraction = default_breakup_threshold);

struct PopulationPoint {
    double area;   // input pulse area, rad
    double rho11;  // exciton population at the observation time
};

// Evolves one dot at Delta_c (or the whole ensemble when `ensemble_average`) at zeta = 0 under
// the configured sech pulse of each area; records rho11 at observation_time.
std::vector<PopulationPoint> population_vs_area_scan(std::span<const double> areas,
                                                     double observation_time,
                                                     const SimConfig& config,
                                                     bool ensemble_average = false,
                                                     unsigned threads = 1);

struct CoherenceSpectrum {
    double time{0.0};
    std::vector<double> delta;
    std::vector<Complex> rho12;
};

// rho12 across the ensemble nodes at zeta = 0 for each requested time.
std::vector<CoherenceSpectrum> coherence_spectrum_scan(std::span<const double> times,
                                                       const SimConfig& config,
                                                       unsigned threads = 1);

} // namespace sitqd
