// presets.hpp — Named scenarios reproducing each figure's data, plus the generic run writer
//
//   fig2   rate maps Gamma+, Gamma-, Gamma_cd, Delta_pm over (Delta, tau) at zeta = 0
//   fig3   pulse area versus distance, phonons off and T = 4.2, 10, 20 K (alpha L = 10)
//   fig4   Re/Im rho12 across the ensemble at tau = 30, 40, ..., 80 ps (zeta = 0)
//   fig5   exciton population at tau = 60 ps versus input area 0..6 pi
//   fig6   space-time envelope of a 2 pi pulse, alpha L = 10, 4.2 K
//   fig7   peak delay versus distance for the fig6 run and the alpha zeta tau0 / 4 estimate
//   fig8   output envelopes and delays for sigma = 10, 15, 20 rad/ps at fixed length
//   fig9   output envelopes at zeta eta / gamma_n = 50 for phonons off and T = 4.2, 10, 20 K
//   fig10  output envelopes at zeta eta / gamma_n = 50 for alpha_p = 0.03, 0.06, 0.12 ps^2
//   fig11  space-time envelope of a 4 pi pulse, alpha L = 10, 4.2 K

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sitqd/config.hpp"
#include "sitqd/propagation.hpp"

namespace sitqd {

const std::vector<std::string>& preset_names();

struct PresetOptions {
    unsigned threads{1};
    std::optional<bool> phonons;     // overrides toggles.phonons of the base scenario
    std::string table_cache_dir{};
};

struct PresetReport {
    std::string config_hash;
    std::vector<std::string> files;
    std::vector<std::string> warnings;
    double validity_metric{0.0};
    std::vector<std::pair<std::string, double>> metrics;
};

// Base configuration of a preset. Throws ConfigError("preset") for an unknown name.
SimConfig preset_config(std::string_view name);

// Runs the preset, writes its data files and manifest.json under out_dir.
PresetReport run_preset(std::string_view name, const std::filesystem::path& out_dir,
                        const PresetOptions& options = {});

// Writes the envelope heatmap and per-slice observables of a run; returns the file names.
std::vector<std::string> write_simulation(const SimulationResult& result, const SimConfig& config,
                                          const std::filesystem::path& out_dir,
                                          const std::string& prefix);

// 1 - (output peak / input peak) of a run.
double deformation(const SimulationResult& result);

} // namespace sitqd
