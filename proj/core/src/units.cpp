// units.cpp — Unit conversions

#include "sitqd/units.hpp"

#include <cmath>
#include <stdexcept>

namespace sitqd::units {

namespace {
const double fwhm_factor = 2.0 * std::sqrt(2.0 * std::log(2.0));
}

double transition_wavelength(double energy_eV) {
    if (!(energy_eV > 0.0) || !std::isfinite(energy_eV)) {
        throw std::domain_error("transition_wavelength: energy must be positive and finite");
    }
    return hc_eV_nm / energy_eV;
}

double photon_energy(double wavelength_nm) {
    if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm)) {
        throw std::domain_error("photon_energy: wavelength must be positive and finite");
    }
    return hc_eV_nm / wavelength_nm;
}

double fwhm_to_sigma(double fwhm) { return fwhm / fwhm_factor; }
double sigma_to_fwhm(double sigma) { return sigma * fwhm_factor; }

} // namespace sitqd::units
