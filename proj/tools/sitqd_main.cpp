// sitqd_main.cpp — Command-line front end: run, preset, rates-table, validate

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sitqd/config.hpp"
#include "sitqd/error.hpp"
#include "sitqd/output.hpp"
#include "sitqd/phonon_bath.hpp"
#include "sitqd/presets.hpp"
#include "sitqd/propagation.hpp"

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_config = 2,
    exit_numerical = 3,
    exit_validity = 4,
};

struct Common {
    std::string out{"out"};
    unsigned threads{1};
    bool seedless{false};
    std::string phonons{};
};

sitqd::SimConfig load_with_overrides(const std::string& file, const Common& common) {
    auto config = sitqd::load_config(file);
    if (!common.phonons.empty()) {
        config.phonons = common.phonons == "on";
    }
    config.output.directory = common.out;
    config.validate();
    return config;
}

double input_validity(const sitqd::SimConfig& config) {
    if (!config.phonons) {
        return 0.0;
    }
    const auto axis = sitqd::make_time_axis(config.grid.tau_window, config.pulse.tau0,
                                            config.grid.points_per_tau0);
    const double peak = sitqd::sech_amplitude(config.pulse.area, config.pulse.tau0, config.pulse.center, axis);
    return sitqd::polaron_validity(peak, config.bath);
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) {
        std::cerr << "warning: " << w << '\n';
    }
}

int cmd_run(const std::string& file, const Common& common) {
    const auto config = load_with_overrides(file, common);
    const double metric = input_validity(config);
    if (metric >= sitqd::validity_hard_threshold) {
        throw sitqd::ValidityError("polaron validity metric " + sitqd::format_double(metric) +
                                   " >= 1 at the input peak");
    }
    const auto start = std::chrono::steady_clock::now();
    sitqd::RunOptions options;
    options.threads = common.threads;
    options.table_cache_dir = common.out;
    const auto result = sitqd::run_simulation(config, options);
    const std::filesystem::path dir = common.out;
    auto files = sitqd::write_simulation(result, config, dir, "run");

    sitqd::RunManifest manifest;
    manifest.command = "run " + file;
    manifest.config_hash = sitqd::config_hash(config);
    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.validity_metric = result.validity_metric;
    manifest.warnings = result.warnings;
    manifest.files = files;
    manifest.metrics = {{"eta_per_mm_ps", result.medium.eta},
                        {"alpha_per_mm", result.medium.alpha},
                        {"beer_alpha_per_mm", result.beer_alpha},
                        {"mean_B", result.mean_B},
                        {"input_area", result.slices.front().area},
                        {"output_area", result.slices.back().area},
                        {"output_peak", result.slices.back().peak_value},
                        {"output_delay_ps", result.slices.back().peak_time - result.slices.front().peak_time}};
    sitqd::write_manifest(dir / "manifest.json", manifest);
    print_warnings(result.warnings);
    std::cout << "wrote " << files.size() + 1 << " files to " << dir.string() << '\n';
    return exit_ok;
}

int cmd_preset(const std::string& name, const Common& common) {
    sitqd::PresetOptions options;
    options.threads = common.threads;
    options.table_cache_dir = common.out;
    if (!common.phonons.empty()) {
        options.phonons = common.phonons == "on";
    }
    const auto report = sitqd::run_preset(name, common.out, options);
    print_warnings(report.warnings);
    for (const auto& [key, value] : report.metrics) {
        std::cout << key << " = " << sitqd::format_double(value) << '\n';
    }
    std::cout << "wrote " << report.files.size() + 1 << " files to " << common.out << '\n';
    return report.validity_metric >= sitqd::validity_hard_threshold ? exit_validity : exit_ok;
}

int cmd_rates_table(const std::string& file, const Common& common) {
    auto config = load_with_overrides(file, common);
    config.phonons = true;
    const auto ensemble = sitqd::make_ensemble(config);
    sitqd::RunOptions options;
    options.threads = common.threads;
    const auto table = sitqd::prepare_rate_table(config, ensemble, options);
    const std::filesystem::path dir = common.out;
    std::filesystem::create_directories(dir);
    table->save(dir / "rate_table.bin");

    static constexpr const char* names[] = {"cosh_f", "sinh_cos", "exp_sin", "expm_sin",
                                            "exp_sin_re", "cosh_h", "sinh_sin"};
    std::vector<std::string> files{"rate_table.bin"};
    const auto omega = table->omega_axis();
    const auto delta = table->delta_axis();
    for (std::size_t k = 0; k < sitqd::kernel_count; ++k) {
        const auto grid = table->grid(static_cast<sitqd::Kernel>(k));
        sitqd::Heatmap map{{"delta", "rad/ps"},
                           {delta.begin(), delta.end()},
                           {"omega_r", "rad/ps"},
                           {omega.begin(), omega.end()},
                           {names[k], k == 6 ? "ps^2" : "ps"},
                           {grid.begin(), grid.end()}};
        const std::string name = std::string("rate_kernel_") + names[k] + ".dat";
        sitqd::write_heatmap(dir / name,
                             {std::string("rate-table kernel ") + names[k], sitqd::config_hash(config),
                              {"mean_B " + sitqd::format_double(table->mean_B())}},
                             map);
        files.push_back(name);
    }
    sitqd::RunManifest manifest;
    manifest.command = "rates-table " + file;
    manifest.config_hash = sitqd::config_hash(config);
    manifest.validity_metric = input_validity(config);
    manifest.files = files;
    manifest.metrics = {{"mean_B", table->mean_B()},
                        {"omega_max", table->spec().omega_max},
                        {"delta_span", table->spec().delta_span}};
    sitqd::write_manifest(dir / "manifest.json", manifest);
    std::cout << "wrote " << files.size() + 1 << " files to " << dir.string() << '\n';
    return exit_ok;
}

int cmd_validate(const std::string& file, const Common& common) {
    const auto config = load_with_overrides(file, common);
    const auto medium = sitqd::medium_params(config);
    const double metric = input_validity(config);
    std::cout << "config_hash " << sitqd::config_hash(config) << '\n'
              << "alpha_per_mm " << sitqd::format_double(medium.alpha) << '\n'
              << "eta_per_mm_ps " << sitqd::format_double(medium.eta) << '\n'
              << "polaron_validity " << sitqd::format_double(metric) << '\n';
    if (metric >= sitqd::validity_hard_threshold) {
        std::cerr << "error: polaron validity metric >= 1\n";
        return exit_validity;
    }
    if (metric >= sitqd::validity_warning_threshold) {
        std::cerr << "warning: polaron validity metric >= 0.1\n";
    }
    std::cout << "ok\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sitqd: pulse propagation through a phonon-coupled quantum-dot ensemble"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--out", common.out, "Output directory")->capture_default_str();
    app.add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_flag("--seedless", common.seedless, "Accepted for compatibility; the simulation uses no random numbers");
    app.add_option("--phonons", common.phonons, "Override the phonon toggle")
        ->check(CLI::IsMember({"on", "off"}));

    std::string file;
    std::string preset;
    auto* run = app.add_subcommand("run", "Propagate the pulse described by a config file");
    run->add_option("config", file, "Config file")->required()->check(CLI::ExistingFile);
    auto* pre = app.add_subcommand("preset", "Run a named figure scenario");
    pre->add_option("name", preset, "Preset name")->required();
    auto* rates = app.add_subcommand("rates-table", "Build and dump the phonon rate table of a config");
    rates->add_option("config", file, "Config file")->required()->check(CLI::ExistingFile);
    auto* val = app.add_subcommand("validate", "Parse and check a config file");
    val->add_option("config", file, "Config file")->required()->check(CLI::ExistingFile);
    for (auto* sub : {run, pre, rates, val}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*run) {
            return cmd_run(file, common);
        }
        if (*pre) {
            return cmd_preset(preset, common);
        }
        if (*rates) {
            return cmd_rates_table(file, common);
        }
        return cmd_validate(file, common);
    } catch (const sitqd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const sitqd::ValidityError& e) {
        std::cerr << "validity error: " << e.what() << '\n';
        return exit_validity;
    } catch (const sitqd::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const sitqd::RangeError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
