// presets.cpp — Figure scenarios and their data files

#include "sitqd/presets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "sitqd/error.hpp"
#include "sitqd/output.hpp"
#include "sitqd/units.hpp"

namespace sitqd {

namespace {

using Runner = std::function<void(const SimConfig&, const std::filesystem::path&,
                                  const PresetOptions&, PresetReport&)>;

constexpr double pi = units::pi;

RunOptions run_options(const PresetOptions& o) {
    RunOptions r;
    r.threads = o.threads;
    r.table_cache_dir = o.table_cache_dir;
    return r;
}

void set_length_alpha(SimConfig& c, double alpha_l) { c.medium.length = alpha_l / medium_params(c).alpha; }

void set_length_eta(SimConfig& c, double zeta_eta) {
    c.medium.length = zeta_eta * units::gamma_n / medium_params(c).eta;
}

void absorb(PresetReport& report, const SimulationResult& r, const std::string& tag) {
    for (const auto& w : r.warnings) {
        report.warnings.push_back(tag + ": " + w);
    }
    report.validity_metric = std::max(report.validity_metric, r.validity_metric);
}

TableHeader header(const std::string& title, const SimConfig& c, std::vector<std::string> notes = {}) {
    return {title, config_hash(c), std::move(notes)};
}

std::vector<double> axis_values(const TimeAxis& axis) {
    std::vector<double> v(axis.size);
    for (std::size_t i = 0; i < axis.size; ++i) {
        v[i] = axis.at(i);
    }
    return v;
}

std::string temperature_tag(const SimConfig& c) {
    return c.phonons ? format_double(c.bath.temperature) + "K" : "off";
}

void fig2(const SimConfig& c, const std::filesystem::path& dir, const PresetOptions&,
          PresetReport& report) {
    const auto corr = CorrelationTable::build(c.bath);
    const KernelIntegrands integrands(corr);
    const double mean_B = corr.mean_B();
    const auto axis = make_time_axis(c.grid.tau_window, c.pulse.tau0, c.grid.points_per_tau0);
    const double amplitude = sech_amplitude(c.pulse.area, c.pulse.tau0, c.pulse.center, axis);

    std::vector<double> deltas;
    for (int j = -150; j <= 150; ++j) {
        deltas.push_back(0.1 * j * units::gamma_n);
    }
    std::vector<double> taus;
    for (int i = 0; i <= 200; ++i) {
        taus.push_back(20.0 + 0.2 * i);
    }
    const std::size_t nx = deltas.size();
    std::vector<double> gp(nx * taus.size()), gm(gp.size()), gcd(gp.size()), dpm(gp.size());
    for (std::size_t r = 0; r < taus.size(); ++r) {
        const Complex omega = amplitude / std::cosh((taus[r] - c.pulse.center) / c.pulse.tau0);
        for (std::size_t j = 0; j < nx; ++j) {
            const auto k = compute_kernels(mean_B * std::abs(omega), deltas[j], integrands);
            const auto rates = assemble_rates(omega, deltas[j], k, mean_B);
            gp[r * nx + j] = rates.gamma_plus;
            gm[r * nx + j] = rates.gamma_minus;
            gcd[r * nx + j] = rates.gamma_cd;
            dpm[r * nx + j] = rates.delta_pm;
        }
    }
    auto write = [&](const char* file, const char* name, const std::vector<double>& values) {
        Heatmap map{{"delta", "rad/ps"}, deltas, {"tau", "ps"}, taus, {name, "1/ps"}, values};
        write_heatmap(dir / file, header(std::string("phonon-induced ") + name + " at zeta = 0", c), map);
        report.files.emplace_back(file);
    };
    write("fig2_gamma_plus.dat", "gamma_plus", gp);
    write("fig2_gamma_minus.dat", "gamma_minus", gm);
    write("fig2_gamma_cd.dat", "gamma_cd", gcd);
    write("fig2_delta_pm.dat", "delta_pm", dpm);

    const std::size_t centre = static_cast<std::size_t>(std::lround((c.pulse.center - 20.0) / 0.2));
    auto argmax = [&](const std::vector<double>& v) {
        const auto first = v.begin() + static_cast<std::ptrdiff_t>(centre * nx);
        return deltas[static_cast<std::size_t>(std::max_element(first, first + static_cast<std::ptrdiff_t>(nx)) - first)];
    };
    report.metrics.emplace_back("argmax_delta_gamma_plus", argmax(gp));
    report.metrics.emplace_back("argmax_delta_gamma_minus", argmax(gm));
    report.validity_metric = polaron_validity(amplitude, c.bath.omega_b, mean_B);
}

void fig3(const SimConfig& base, const std::filesystem::path& dir, const PresetOptions& o,
          PresetReport& report) {
    std::vector<SimConfig> variants;
    for (double t : {-1.0, 4.2, 10.0, 20.0}) {
        SimConfig c = base;
        c.phonons = t >= 0.0;
        if (c.phonons) {
            c.bath.temperature = t;
        }
        variants.push_back(c);
    }
    std::vector<SimulationResult> runs;
    std::vector<Column> cols{{"zeta", "mm"}, {"alpha_zeta", ""}};
    std::vector<std::string> notes;
    for (const auto& c : variants) {
        runs.push_back(run_simulation(c, run_options(o)));
        absorb(report, runs.back(), temperature_tag(c));
        cols.push_back({"area_" + temperature_tag(c), "rad"});
        notes.push_back("variant " + temperature_tag(c) + " config_hash " + config_hash(c));
        report.metrics.emplace_back("final_area_over_pi_" + temperature_tag(c),
                                    runs.back().slices.back().area / pi);
    }
    const double alpha = runs.front().medium.alpha;
    std::vector<std::vector<double>> rows;
    for (std::size_t s = 0; s < runs.front().slices.size(); ++s) {
        const double z = runs.front().slices[s].zeta;
        std::vector<double> row{z, alpha * z};
        for (const auto& r : runs) {
            row.push_back(r.slices[s].area);
        }
        rows.push_back(std::move(row));
    }
    write_table(dir / "fig3_area.dat", header("pulse area versus distance", base, notes), cols, rows);
    report.files.emplace_back("fig3_area.dat");
}

void fig4(const SimConfig& c, const std::filesystem::path& dir, const PresetOptions& o,
          PresetReport& report) {
    const std::vector<double> times{30.0, 40.0, 50.0, 60.0, 70.0, 80.0};
    const auto spectra = coherence_spectrum_scan(times, c, o.threads);
    std::vector<Column> cols{{"delta", "rad/ps"}};
    for (double t : times) {
        cols.push_back({"re_rho12_t" + format_double(t), ""});
        cols.push_back({"im_rho12_t" + format_double(t), ""});
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < spectra.front().delta.size(); ++k) {
        std::vector<double> row{spectra.front().delta[k]};
        for (const auto& s : spectra) {
            row.push_back(s.rho12[k].real());
            row.push_back(s.rho12[k].imag());
        }
        rows.push_back(std::move(row));
    }
    write_table(dir / "fig4_coherence.dat", header("ensemble coherence at zeta = 0", c), cols, rows);
    report.files.emplace_back("fig4_coherence.dat");
    const auto centre = spectra.front().delta.size() / 2;
    for (const auto& s : spectra) {
        report.metrics.emplace_back("im_rho12_resonance_t" + format_double(s.time), s.rho12[centre].imag());
    }
}

void fig5(const SimConfig& c, const std::filesystem::path& dir, const PresetOptions& o,
          PresetReport& report) {
    std::vector<double> areas;
    for (int i = 0; i <= 300; ++i) {
        areas.push_back(0.02 * i * pi);
    }
    const auto single = population_vs_area_scan(areas, c.observation_time, c, false, o.threads);
    const auto averaged = population_vs_area_scan(areas, c.observation_time, c, true, o.threads);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < areas.size(); ++i) {
        rows.push_back({areas[i], areas[i] / pi, single[i].rho11, averaged[i].rho11});
    }
    write_table(dir / "fig5_population.dat",
                header("exciton population versus input area",
                       c, {"observation time " + format_double(c.observation_time) + " ps"}),
                {{"area", "rad"}, {"area_over_pi", ""}, {"rho11_single_qd", ""}, {"rho11_ensemble", ""}},
                rows);
    report.files.emplace_back("fig5_population.dat");
    const double amplitude = sech_amplitude(areas.back(), c.pulse.tau0, c.pulse.center,
                                            make_time_axis(c.grid.tau_window, c.pulse.tau0,
                                                           c.grid.points_per_tau0));
    report.validity_metric =
        c.phonons ? polaron_validity(amplitude, c.bath.omega_b, mean_displacement(c.bath)) : 0.0;
}

void write_profiles(const std::filesystem::path& file, const std::string& title, const SimConfig& c,
                    const std::vector<std::pair<std::string, const SimulationResult*>>& runs,
                    std::vector<std::string> notes) {
    const auto& first = *runs.front().second;
    std::vector<Column> cols{{"tau", "ps"}, {"abs_omega_input", "rad/ps"}};
    for (const auto& [tag, r] : runs) {
        cols.push_back({"abs_omega_" + tag, "rad/ps"});
    }
    std::vector<std::vector<double>> rows;
    const auto input = first.field.row(0);
    for (std::size_t i = 0; i < first.field.tau.size; ++i) {
        std::vector<double> row{first.field.tau.at(i), std::abs(input[i])};
        for (const auto& [tag, r] : runs) {
            row.push_back(std::abs(r->field.row(r->field.rows() - 1)[i]));
        }
        rows.push_back(std::move(row));
    }
    write_table(file, header(title, c, std::move(notes)), cols, rows);
}

void fig6(const SimConfig& c, const std::filesystem::path& dir, const PresetOptions& o,
          PresetReport& report) {
    const auto r = run_simulation(c, run_options(o));
    absorb(report, r, "fig6");
    for (auto& f : write_simulation(r, c, dir, "fig6")) {
        report.files.push_back(f);
    }
    bool monotone = true;
    for (std::size_t s = 1; s < r.slices.size(); ++s) {
        monotone = monotone && r.slices[s].peak_value <= r.slices[s - 1].peak_value;
    }
    report.metrics.emplace_back("peak_monotone_decreasing", monotone ? 1.0 : 0.0);
    report.metrics.emplace_back("final_area_over_pi", r.slices.back().area / pi);
}

void fig7(const SimConfig& c, const std::filesystem::path& dir, const PresetOptions& o,
          PresetReport& report) {
    const auto r = run_simulation(c, run_options(o));
    absorb(report, r, "fig7");
    std::vector<std::vector<double>> rows;
    const double t_in = r.slices.front().peak_time;
    for (const auto& s : r.slices) {
        rows.push_back({s.zeta, r.medium.alpha * s.zeta, s.peak_time - t_in,
                        delay_estimate(r.medium.alpha, s.zeta, c.pulse.tau0)});
    }
    write_table(dir / "fig7_delay.dat", header("peak delay versus distance", c),
                {{"zeta", "mm"}, {"alpha_zeta", ""}, {"delay", "ps"}, {"delay_estimate", "ps"}}, rows);
    report.files.emplace_back("fig7_delay.dat");
    write_profiles(dir / "fig7_profiles.dat", "input and output envelopes", c, {{"output", &r}}, {});
    report.files.emplace_back("fig7_profiles.dat");
    report.metrics.emplace_back("output_delay_ps", r.slices.back().peak_time - t_in);
    report.metrics.emplace_back("delay_estimate_ps", delay_estimate(r.medium.alpha, c.medium.length, c.pulse.tau0));
}

void fig8(const SimConfig& base, const std::filesystem::path& dir, const PresetOptions& o,
          PresetReport& report) {
    std::vector<SimulationResult> runs;
    std::vector<std::pair<std::string, const SimulationResult*>> tagged;
    std::vector<std::string> notes;
    std::vector<std::vector<double>> delay_rows;
    for (double sigma : {10.0, 15.0, 20.0}) {
        SimConfig c = base;
        c.ensemble.sigma = sigma;
        runs.push_back(run_simulation(c, run_options(o)));
        const auto& r = runs.back();
        absorb(report, r, "sigma " + format_double(sigma));
        notes.push_back("sigma " + format_double(sigma) + " config_hash " + config_hash(c));
        const double delay = r.slices.back().peak_time - r.slices.front().peak_time;
        delay_rows.push_back({sigma, r.medium.alpha, delay,
                              delay_estimate(r.medium.alpha, c.medium.length, c.pulse.tau0)});
        report.metrics.emplace_back("delay_ps_sigma_" + format_double(sigma), delay);
    }
    for (std::size_t i = 0; i < runs.size(); ++i) {
        tagged.emplace_back("sigma_" + format_double(delay_rows[i][0]), &runs[i]);
    }
    write_profiles(dir / "fig8_profiles.dat", "output envelopes versus inhomogeneous width", base,
                   tagged, notes);
    write_table(dir / "fig8_delay.dat", header("delay versus inhomogeneous width", base, notes),
                {{"sigma", "rad/ps"}, {"alpha", "1/mm"}, {"delay", "ps"}, {"delay_estimate", "ps"}},
                delay_rows);
    report.files.emplace_back("fig8_profiles.dat");
    report.files.emplace_back("fig8_delay.dat");
}

void sweep(const SimConfig& base, const std::filesystem::path& dir, const PresetOptions& o,
           PresetReport& report, const std::string& name, const std::vector<SimConfig>& variants,
           const std::vector<std::string>& tags, const std::string& title) {
    std::vector<SimulationResult> runs;
    std::vector<std::string> notes;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < variants.size(); ++i) {
        runs.push_back(run_simulation(variants[i], run_options(o)));
        absorb(report, runs.back(), tags[i]);
        notes.push_back(tags[i] + " config_hash " + config_hash(variants[i]));
        const auto& r = runs.back();
        const double d = deformation(r);
        rows.push_back({static_cast<double>(i), r.slices.back().peak_value,
                        r.slices.back().peak_time - r.slices.front().peak_time, r.slices.back().area, d});
        report.metrics.emplace_back("deformation_" + tags[i], d);
    }
    std::vector<std::pair<std::string, const SimulationResult*>> tagged;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        tagged.emplace_back(tags[i], &runs[i]);
    }
    write_profiles(dir / (name + "_profiles.dat"), title, base, tagged, notes);
    notes.insert(notes.begin(), "variant index follows the variant list above");
    write_table(dir / (name + "_summary.dat"), header(title, base, notes),
                {{"variant", ""}, {"output_peak", "rad/ps"}, {"delay", "ps"}, {"output_area", "rad"},
                 {"deformation", ""}},
                rows);
    report.files.push_back(name + "_profiles.dat");
    report.files.push_back(name + "_summary.dat");
}

void fig9(const SimConfig& base, const std::filesystem::path& dir, const PresetOptions& o,
          PresetReport& report) {
    std::vector<SimConfig> variants;
    std::vector<std::string> tags;
    for (double t : {-1.0, 4.2, 10.0, 20.0}) {
        SimConfig c = base;
        c.phonons = t >= 0.0;
        if (c.phonons) {
            c.bath.temperature = t;
        }
        tags.push_back(temperature_tag(c));
        variants.push_back(c);
    }
    sweep(base, dir, o, report, "fig9", variants, tags,
          "output envelope at zeta eta / gamma_n = 50 versus temperature");
}

void fig10(const SimConfig& base, const std::filesystem::path& dir, const PresetOptions& o,
           PresetReport& report) {
    std::vector<SimConfig> variants;
    std::vector<std::string> tags;
    for (double a : {0.03, 0.06, 0.12}) {
        SimConfig c = base;
        c.bath.alpha_p = a;
        tags.push_back("alpha_p_" + format_double(a));
        variants.push_back(c);
    }
    sweep(base, dir, o, report, "fig10", variants, tags,
          "output envelope at zeta eta / gamma_n = 50 versus phonon coupling");
}

void fig11(const SimConfig& c, const std::filesystem::path& dir, const PresetOptions& o,
           PresetReport& report) {
    const auto r = run_simulation(c, run_options(o));
    absorb(report, r, "fig11");
    for (auto& f : write_simulation(r, c, dir, "fig11")) {
        report.files.push_back(f);
    }
    const auto out = r.field.row(r.field.rows() - 1);
    const auto m = detect_peaks(out, r.field.tau.step);
    report.metrics.emplace_back("output_peak_count", static_cast<double>(m.peak_count));
    for (std::size_t i = 0; i < m.sub_pulse_areas.size(); ++i) {
        report.metrics.emplace_back("sub_pulse_area_over_pi_" + std::to_string(i + 1),
                                    m.sub_pulse_areas[i] / pi);
    }
    report.metrics.emplace_back("output_area_over_pi", m.area / pi);
}

struct PresetEntry {
    std::function<SimConfig()> config;
    Runner run;
};

const std::map<std::string, PresetEntry, std::less<>>& registry() {
    static const std::map<std::string, PresetEntry, std::less<>> table{
        {"fig2", {[] { return SimConfig{}; }, fig2}},
        {"fig3",
         {[] {
              SimConfig c;
              c.output.slice_stride = 10;
              set_length_alpha(c, 10.0);
              return c;
          },
          fig3}},
        {"fig4", {[] { return SimConfig{}; }, fig4}},
        {"fig5", {[] { return SimConfig{}; }, fig5}},
        {"fig6",
         {[] {
              SimConfig c;
              c.output.slice_stride = 4;
              set_length_alpha(c, 10.0);
              return c;
          },
          fig6}},
        {"fig7",
         {[] {
              SimConfig c;
              c.output.slice_stride = 50;
              set_length_alpha(c, 10.0);
              return c;
          },
          fig7}},
        {"fig8",
         {[] {
              SimConfig c;
              c.output.slice_stride = 1000;
              set_length_alpha(c, 10.0);
              return c;
          },
          fig8}},
        {"fig9",
         {[] {
              SimConfig c;
              c.output.slice_stride = 1000;
              set_length_eta(c, 50.0);
              return c;
          },
          fig9}},
        {"fig10",
         {[] {
              SimConfig c;
              c.output.slice_stride = 1000;
              set_length_eta(c, 50.0);
              return c;
          },
          fig10}},
        {"fig11",
         {[] {
              SimConfig c;
              c.pulse.area = 4.0 * pi;
              c.output.slice_stride = 4;
              set_length_alpha(c, 10.0);
              return c;
          },
          fig11}},
    };
    return table;
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5",  "fig6",
                                                "fig7", "fig8", "fig9", "fig10", "fig11"};
    return names;
}

SimConfig preset_config(std::string_view name) {
    const auto it = registry().find(name);
    if (it == registry().end()) {
        std::string list;
        for (const auto& n : preset_names()) {
            list += list.empty() ? n : ", " + n;
        }
        throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (available: " + list + ")");
    }
    return it->second.config();
}

PresetReport run_preset(std::string_view name, const std::filesystem::path& out_dir,
                        const PresetOptions& options) {
    SimConfig config = preset_config(name);
    if (options.phonons) {
        config.phonons = *options.phonons;
    }
    config.output.directory = out_dir.string();
    config.validate();

    const auto start = std::chrono::steady_clock::now();
    PresetReport report;
    report.config_hash = config_hash(config);
    registry().find(name)->second.run(config, out_dir, options, report);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (report.validity_metric >= validity_warning_threshold) {
        report.warnings.push_back("polaron validity metric " + format_double(report.validity_metric) +
                                  (report.validity_metric >= validity_hard_threshold
                                       ? " >= 1: outside the validity range"
                                       : " >= 0.1: weak-field condition marginal"));
    }
    RunManifest manifest;
    manifest.command = "preset " + std::string(name);
    manifest.config_hash = report.config_hash;
    manifest.wall_seconds = wall;
    manifest.validity_metric = report.validity_metric;
    manifest.warnings = report.warnings;
    manifest.files = report.files;
    manifest.metrics = report.metrics;
    write_manifest(out_dir / "manifest.json", manifest);
    return report;
}

std::vector<std::string> write_simulation(const SimulationResult& result, const SimConfig& config,
                                          const std::filesystem::path& out_dir,
                                          const std::string& prefix) {
    const auto& field = result.field;
    Heatmap map;
    map.x = {"tau", "ps"};
    map.x_axis = axis_values(field.tau);
    map.y = {"zeta", "mm"};
    map.y_axis = field.zeta;
    map.value = {"abs_omega", "rad/ps"};
    map.values.resize(field.envelope.size());
    for (std::size_t i = 0; i < field.envelope.size(); ++i) {
        map.values[i] = std::abs(field.envelope[i]);
    }
    const std::string envelope_file = prefix + "_envelope.dat";
    write_heatmap(out_dir / envelope_file,
                  header("Rabi envelope |Omega(zeta, tau)|", config,
                         {"eta " + format_double(result.medium.eta) + " 1/(mm ps), alpha " +
                          format_double(result.medium.alpha) + " 1/mm"}),
                  map);

    Heatmap phase = map;
    phase.value = {"arg_omega", "rad"};
    for (std::size_t i = 0; i < field.envelope.size(); ++i) {
        phase.values[i] = std::arg(field.envelope[i]);
    }
    const std::string phase_file = prefix + "_phase.dat";
    write_heatmap(out_dir / phase_file, header("Rabi envelope phase", config), phase);

    std::vector<std::vector<double>> rows;
    for (const auto& s : result.slices) {
        rows.push_back({s.zeta, s.zeta * result.medium.eta / units::gamma_n, s.zeta * result.medium.alpha,
                        s.area, s.peak_value, s.peak_time, s.energy});
    }
    const std::string slices_file = prefix + "_slices.dat";
    write_table(out_dir / slices_file,
                header("per-slice observables", config,
                       {"area convention " + std::string(to_string(config.area_convention))}),
                {{"zeta", "mm"}, {"zeta_eta", "1/gamma_n"}, {"alpha_zeta", ""}, {"area", "rad"},
                 {"peak", "rad/ps"}, {"peak_time", "ps"}, {"energy", "rad^2/ps"}},
                rows);
    return {envelope_file, phase_file, slices_file};
}

double deformation(const SimulationResult& result) {
    if (result.slices.empty() || result.slices.front().peak_value <= 0.0) {
        return 0.0;
    }
    return 1.0 - result.slices.back().peak_value / result.slices.front().peak_value;
}

} // namespace sitqd
