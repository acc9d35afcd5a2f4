// config.hpp — Simulation configuration, its text format and content hash
//
// The text format is one `section.key = value [unit]` assignment per line; `#` starts a comment
// and blank lines are ignored. Values without a unit are read in the internal unit of the key.
//
//   bath.alpha_p        ps^2
//   bath.omega_b        rad/ps | meV | ueV
//   bath.temperature    K
//   relax.gamma         rad/ps | 1/ps | meV | ueV | ns | ps   (ns/ps give a lifetime: rate = 1/value)
//   relax.gamma_d       as relax.gamma
//   ensemble.sigma      rad/ps | meV | ueV
//   ensemble.fwhm       as ensemble.sigma (stored as sigma)
//   ensemble.delta_c    as ensemble.sigma
//   ensemble.scheme     resolved | gauss_hermite | trapezoid
//   ensemble.n_nodes    count (gauss_hermite, trapezoid)
//   ensemble.core_halfwidth, ensemble.core_spacing   rad/ps | meV
//   ensemble.tail_growth, ensemble.extent_sigmas      plain numbers
//   ensemble.single_qd  on | off (one dot at delta_c)
//   medium.density      m^-3 | cm^-3 | mm^-3
//   medium.length       mm | um | 1/alpha | gamma_n/eta
//   medium.photon_energy eV | meV | nm
//   pulse.area          rad | pi
//   pulse.tau0, pulse.center   ps | ns | 1/gamma_n
//   grid.tau_window     ps | 1/gamma_n
//   grid.points_per_tau0, grid.alpha_dzeta, grid.table_omega, grid.table_delta
//   toggles.phonons     on | off
//   output.directory    path (may be quoted)
//   output.slice_stride count
//   analysis.area_convention  modulus | signed_real
//   scan.observation_time     ps | 1/gamma_n

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "sitqd/analysis.hpp"
#include "sitqd/bloch_dynamics.hpp"
#include "sitqd/ensemble_medium.hpp"
#include "sitqd/phonon_bath.hpp"
#include "sitqd/units.hpp"

namespace sitqd {

struct EnsembleConfig {
    double sigma{units::fwhm_to_sigma(units::energy_to_angular_frequency(23.5))};  // rad/ps
    double delta_c{0.0};                                                           // rad/ps
    EnsembleScheme scheme{EnsembleScheme::resolved};
    std::size_t n_nodes{63};
    ResolvedGrid resolved{};
    bool single_qd{false};

    bool operator==(const EnsembleConfig&) const = default;
};

struct MediumConfig {
    double density{5e20};       // m^-3
    double length{1.0};         // mm
    double photon_energy{1.3};  // eV

    bool operator==(const MediumConfig&) const = default;
};

struct PulseConfig {
    double area{2.0 * units::pi};  // rad
    double tau0{6.373};            // ps
    double center{40.0};           // ps

    bool operator==(const PulseConfig&) const = default;
};

struct GridConfig {
    double tau_window{120.0};  // ps
    std::size_t points_per_tau0{100};
    double alpha_dzeta{0.05};  // alpha * d zeta per slice
    std::size_t table_omega{201};
    std::size_t table_delta{401};

    bool operator==(const GridConfig&) const = default;
};

struct OutputConfig {
    std::string directory{"out"};
    std::size_t slice_stride{1};

    bool operator==(const OutputConfig&) const = default;
};

struct SimConfig {
    PhononBathParams bath{};
    RelaxationParams relax{};
    EnsembleConfig ensemble{};
    MediumConfig medium{};
    PulseConfig pulse{};
    GridConfig grid{};
    bool phonons{true};
    OutputConfig output{};
    AreaConvention area_convention{AreaConvention::modulus};
    double observation_time{60.0};  // ps

    // Throws ConfigError naming the first offending key.
    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

// Parses and validates. Unknown keys, malformed values, unit mismatches and invariant failures
// raise ConfigError carrying the key path.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

// Canonical text form: every key, internal units, shortest round-trip numbers.
std::string to_text(const SimConfig& config);

// 16-hex-digit FNV-1a digest of to_text(config).
std::string config_hash(const SimConfig& config);

} // namespace sitqd
