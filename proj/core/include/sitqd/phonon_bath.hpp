// phonon_bath.hpp — LA-phonon bath: spectral density, <B>, phi(tau), polaron Green's functions
//
// J(w) = alpha_p w^3 exp(-w^2 / 2 w_b^2) describes deformation-potential coupling.
// All frequency integrals run over [0, 8 w_b]; the Gaussian cutoff makes the tail
// negligible there. The w -> 0 limit of J(w)/w^2 coth(hbar w / 2 k_B T) is the
// finite constant 2 alpha_p k_B T / hbar and is substituted analytically.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "sitqd/units.hpp"

namespace sitqd {

using Complex = std::complex<double>;

struct PhononBathParams {
    double alpha_p{0.03};                                          // ps^2
    double omega_b{units::energy_to_angular_frequency(1.0)};       // rad/ps
    double temperature{4.2};                                       // K

    // Throws std::domain_error naming the offending field.
    void validate() const;

    bool operator==(const PhononBathParams&) const = default;
};

// Frequency-integration controls. Defaults are the production settings.
struct BathQuadrature {
    double cutoff_factor{8.0};        // omega_max = cutoff_factor * omega_b
    double relative_tolerance{1e-9};
};

// J(omega) in rad/ps. Throws std::domain_error for omega < 0.
double spectral_density(double omega, const PhononBathParams& params);

// omega * coth(hbar omega / 2 k_B T), equal to omega at T = 0 and to
// 2 k_B T / hbar at omega = 0. J(w)/w^2 coth(...) == alpha_p e^{-w^2/2w_b^2} * this.
double thermal_weight(double omega, double temperature);

// <B> = exp(-1/2 int J/w^2 coth dw). Exactly 1 when alpha_p == 0.
double mean_displacement(const PhononBathParams& params, const BathQuadrature& quad = {});

// phi(tau) = int J/w^2 [coth cos(w tau) - i sin(w tau)] dw, tau >= 0.
Complex correlation_function(double tau, const PhononBathParams& params,
                             const BathQuadrature& quad = {});

struct GreenFunctions {
    Complex g;  // <B>^2 (cosh phi - 1)
    Complex u;  // <B>^2 sinh phi
};

GreenFunctions green_functions(Complex phi, double mean_B);

// (Omega / w_b)^2 (1 - <B>^4). Values >= 0.1 warrant a warning, >= 1 is a hard violation.
double polaron_validity(double omega_peak, const PhononBathParams& params);
double polaron_validity(double omega_peak, double omega_b, double mean_B);

inline constexpr double validity_warning_threshold = 0.1;
inline constexpr double validity_hard_threshold = 1.0;

struct CorrelationGrid {
    double step_scaled{0.02};  // omega_b * dtau
    double max_scaled{12.0};   // omega_b * tau_max
};

// phi(tau) sampled on a uniform grid [0, tau_max]; immutable once built.
class CorrelationTable {
public:
    static CorrelationTable build(const PhononBathParams& params,
                                  const CorrelationGrid& grid = {},
                                  const BathQuadrature& quad = {});

    const PhononBathParams& params() const noexcept { return params_; }
    double mean_B() const noexcept { return mean_B_; }
    double tau_step() const noexcept { return tau_step_; }
    double tau_max() const noexcept { return tau_step_ * static_cast<double>(phi_.size() - 1); }
    std::size_t size() const noexcept { return phi_.size(); }
    double tau(std::size_t i) const noexcept { return tau_step_ * static_cast<double>(i); }
    std::span<const Complex> phi() const noexcept { return phi_; }

private:
    PhononBathParams params_{};
    double mean_B_{1.0};
    double tau_step_{0.0};
    std::vector<Complex> phi_;
};

} // namespace sitqd
