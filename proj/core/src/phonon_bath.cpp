// phonon_bath.cpp — Phonon spectral integrals

#include "sitqd/phonon_bath.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sitqd/error.hpp"

namespace sitqd {

namespace {

using boost::math::quadrature::gauss_kronrod;

// Adaptive Gauss-Kronrod over [0, omega_max]; throws with the achieved tolerance
// when the error estimate does not meet the requested one.
template <class F>
double integrate(F&& f, double omega_max, const BathQuadrature& quad, const char* what) {
    double error = 0.0;
    double l1 = 0.0;
    const double value = gauss_kronrod<double, 61>::integrate(
        f, 0.0, omega_max, 20, quad.relative_tolerance, &error, &l1);
    const double scale = l1 > 0.0 ? l1 : 1.0;
    if (!std::isfinite(value) || error > 10.0 * quad.relative_tolerance * scale) {
        throw NumericalError(std::string(what) + ": frequency quadrature did not converge",
                             error / scale);
    }
    return value;
}

// J(w)/w^2 coth(hbar w / 2 k_B T) with the w -> 0 limit built in.
double even_integrand(double omega, const PhononBathParams& p) {
    const double x = omega / p.omega_b;
    return p.alpha_p * std::exp(-0.5 * x * x) * thermal_weight(omega, p.temperature);
}

double odd_integrand(double omega, const PhononBathParams& p) {
    const double x = omega / p.omega_b;
    return p.alpha_p * std::exp(-0.5 * x * x) * omega;
}

} // namespace

void PhononBathParams::validate() const {
    if (!(alpha_p >= 0.0) || !std::isfinite(alpha_p)) {
        throw std::domain_error("alpha_p must be >= 0");
    }
    if (!(omega_b > 0.0) || !std::isfinite(omega_b)) {
        throw std::domain_error("omega_b must be > 0");
    }
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw std::domain_error("temperature must be >= 0");
    }
}

double spectral_density(double omega, const PhononBathParams& params) {
    if (!(omega >= 0.0)) {
        throw std::domain_error("spectral_density: omega must be >= 0");
    }
    const double x = omega / params.omega_b;
    return params.alpha_p * omega * omega * omega * std::exp(-0.5 * x * x);
}

double thermal_weight(double omega, double temperature) {
    if (temperature <= 0.0) {
        return omega;
    }
    const double two_kt_over_hbar = 2.0 * units::thermal_energy(temperature) / units::hbar_meV_ps;
    const double x = omega / two_kt_over_hbar;
    if (x < 1e-4) {
        return two_kt_over_hbar * (1.0 + x * x / 3.0);
    }
    return omega / std::tanh(x);
}

double mean_displacement(const PhononBathParams& params, const BathQuadrature& quad) {
    params.validate();
    if (params.alpha_p == 0.0) {
        return 1.0;
    }
    const double integral = integrate([&](double w) { return even_integrand(w, params); },
                                      quad.cutoff_factor * params.omega_b, quad,
                                      "mean_displacement");
    return std::exp(-0.5 * integral);
}

Complex correlation_function(double tau, const PhononBathParams& params,
                             const BathQuadrature& quad) {
    if (!(tau >= 0.0)) {
        throw std::domain_error("correlation_function: tau must be >= 0");
    }
    params.validate();
    if (params.alpha_p == 0.0) {
        return {0.0, 0.0};
    }
    const double omega_max = quad.cutoff_factor * params.omega_b;
    const double re = integrate(
        [&](double w) { return even_integrand(w, params) * std::cos(w * tau); }, omega_max, quad,
        "correlation_function");
    if (tau == 0.0) {
        return {re, 0.0};
    }
    const double im = integrate(
        [&](double w) { return -odd_integrand(w, params) * std::sin(w * tau); }, omega_max, quad,
        "correlation_function");
    return {re, im};
}

GreenFunctions green_functions(Complex phi, double mean_B) {
    const double b2 = mean_B * mean_B;
    return {b2 * (std::cosh(phi) - 1.0), b2 * std::sinh(phi)};
}

double polaron_validity(double omega_peak, double omega_b, double mean_B) {
    const double r = omega_peak / omega_b;
    const double b2 = mean_B * mean_B;
    return r * r * (1.0 - b2 * b2);
}

double polaron_validity(double omega_peak, const PhononBathParams& params) {
    return polaron_validity(omega_peak, params.omega_b, mean_displacement(params));
}

CorrelationTable CorrelationTable::build(const PhononBathParams& params,
                                         const CorrelationGrid& grid,
                                         const BathQuadrature& quad) {
    params.validate();
    if (!(grid.step_scaled > 0.0) || !(grid.max_scaled > grid.step_scaled)) {
        throw std::invalid_argument("CorrelationTable: invalid tau grid");
    }
    CorrelationTable table;
    table.params_ = params;
    table.mean_B_ = mean_displacement(params, quad);
    table.tau_step_ = grid.step_scaled / params.omega_b;

    // Simpson integration downstream needs an even number of intervals.
    auto intervals = static_cast<std::size_t>(std::llround(grid.max_scaled / grid.step_scaled));
    intervals += intervals % 2;
    table.phi_.resize(intervals + 1);
    for (std::size_t i = 0; i <= intervals; ++i) {
        table.phi_[i] = correlation_function(table.tau(i), params, quad);
    }
    return table;
}

} // namespace sitqd
