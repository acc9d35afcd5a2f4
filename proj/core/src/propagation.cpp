// propagation.cpp — Pulse envelope, medium coupling and the Heun slice march

#include "sitqd/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "parallel.hpp"
#include "sitqd/error.hpp"
#include "sitqd/units.hpp"

namespace sitqd {

namespace {

double gudermannian(double x) { return 2.0 * std::atan(std::tanh(0.5 * x)); }

double row_energy(std::span<const Complex> row, double step) {
    if (row.size() < 2) {
        return 0.0;
    }
    double sum = 0.5 * (std::norm(row.front()) + std::norm(row.back()));
    for (std::size_t i = 1; i + 1 < row.size(); ++i) {
        sum += std::norm(row[i]);
    }
    return sum * step;
}

SliceObservables observe(std::span<const Complex> row, const TimeAxis& axis, double zeta,
                         AreaConvention convention) {
    SliceObservables obs;
    obs.zeta = zeta;
    obs.area = pulse_area(row, axis.step, convention);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const double m = std::abs(row[i]);
        if (m > obs.peak_value) {
            obs.peak_value = m;
            arg = i;
        }
    }
    obs.peak_time = axis.at(arg);
    obs.energy = row_energy(row, axis.step);
    return obs;
}

void check_finite(std::span<const Complex> row, const TimeAxis& axis, double zeta,
                  const char* what) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (!std::isfinite(row[i].real()) || !std::isfinite(row[i].imag())) {
            std::ostringstream msg;
            msg << "non-finite " << what << " at zeta = " << zeta << " mm, tau = " << axis.at(i)
                << " ps";
            throw NumericalError(msg.str());
        }
    }
}

bool table_covers(const RateTable& table, const RateTableSpec& needed, const PhononBathParams& bath) {
    const auto& have = table.spec();
    return table.bath() == bath && have.omega_max >= needed.omega_max &&
           have.delta_span >= needed.delta_span;
}

} // namespace

std::size_t TimeAxis::index_of(double tau) const noexcept {
    if (size == 0 || !(tau > 0.0)) {
        return 0;
    }
    const auto i = static_cast<std::size_t>(std::llround(tau / step));
    return std::min(i, size - 1);
}

TimeAxis make_time_axis(double window, double tau0, std::size_t points_per_tau0) {
    if (!(window > 0.0) || !(tau0 > 0.0) || points_per_tau0 == 0) {
        throw std::invalid_argument("make_time_axis: window, tau0 and points_per_tau0 must be > 0");
    }
    TimeAxis axis;
    axis.step = tau0 / static_cast<double>(points_per_tau0);
    axis.size = static_cast<std::size_t>(std::floor(window / axis.step + 1e-9)) + 1;
    return axis;
}

double sech_amplitude(double theta0, double tau0, double tau_c, const TimeAxis& axis) {
    if (!(tau0 > 0.0)) {
        throw std::invalid_argument("sech_envelope: tau0 must be > 0");
    }
    const double in_window =
        tau0 * (gudermannian((axis.end() - tau_c) / tau0) - gudermannian(-tau_c / tau0));
    return theta0 / in_window;
}

std::vector<Complex> sech_envelope(double theta0, double tau0, double tau_c, const TimeAxis& axis) {
    const double amplitude = sech_amplitude(theta0, tau0, tau_c, axis);
    std::vector<Complex> row(axis.size);
    for (std::size_t i = 0; i < axis.size; ++i) {
        row[i] = amplitude / std::cosh((axis.at(i) - tau_c) / tau0);
    }
    return row;
}

double coupling_constant(double density_per_m3, double wavelength_nm, double gamma) {
    const double n = density_per_m3 * units::per_m3_to_per_mm3;
    const double lambda = wavelength_nm * units::nm_to_mm;
    return 3.0 * n * lambda * lambda * gamma / (4.0 * units::pi);
}

MediumParams medium_params(const SimConfig& config) {
    MediumParams m;
    m.density = config.medium.density;
    m.length = config.medium.length;
    m.wavelength = units::transition_wavelength(config.medium.photon_energy);
    m.eta = coupling_constant(m.density, m.wavelength, config.relax.gamma);
    m.g_center = gaussian_profile(0.0, config.ensemble.sigma, config.ensemble.delta_c);
    m.alpha = extinction_coefficient(m.eta, m.g_center);
    return m;
}

DetuningEnsemble make_ensemble(const SimConfig& config) {
    const auto& e = config.ensemble;
    if (e.single_qd || e.scheme == EnsembleScheme::single) {
        return single_detuning(e.delta_c);
    }
    switch (e.scheme) {
    case EnsembleScheme::gauss_hermite:
        return build_ensemble(e.sigma, e.delta_c, e.n_nodes);
    case EnsembleScheme::trapezoid:
        return build_trapezoid_ensemble(e.sigma, e.delta_c, e.n_nodes);
    default:
        return build_resolved_ensemble(e.sigma, e.delta_c, e.resolved);
    }
}

EnsembleDriver::EnsembleDriver(DetuningEnsemble ensemble, const RateTable* table,
                               RelaxationParams relax, double mean_B)
    : ensemble_(std::move(ensemble)), relax_(relax), mean_B_(mean_B) {
    if (table != nullptr) {
        columns_.reserve(ensemble_.size());
        for (double delta : ensemble_.nodes) {
            columns_.push_back(table->column(delta));
        }
    }
}

std::vector<Complex> midpoint_fields(std::span<const Complex> row) {
    const std::size_t n = row.size();
    std::vector<Complex> mid(n > 0 ? n - 1 : 0);
    if (n < 2) {
        return mid;
    }
    if (n == 2) {
        mid[0] = 0.5 * (row[0] + row[1]);
        return mid;
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (i == 0) {
            mid[i] = (3.0 * row[0] + 6.0 * row[1] - row[2]) / 8.0;
        } else if (i + 2 == n) {
            mid[i] = (3.0 * row[n - 1] + 6.0 * row[n - 2] - row[n - 3]) / 8.0;
        } else {
            mid[i] = (9.0 * (row[i] + row[i + 1]) - (row[i - 1] + row[i + 2])) / 16.0;
        }
    }
    return mid;
}

template <class Sink>
void EnsembleDriver::evolve_node(std::size_t k, std::span<const Complex> row,
                                 std::span<const Complex> midpoints, const TimeAxis& axis,
                                 Sink&& sink, StepDiagnostics* diagnostics) const {
    StepContext ctx;
    ctx.rates = columns_.empty() ? nullptr : &columns_[k];
    ctx.relax = relax_;
    ctx.mean_B = mean_B_;
    const double delta = ensemble_.nodes[k];
    QdState state = QdState::ground();
    sink(0, state);
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
        state = evolve_interval(state, row[i], midpoints[i], row[i + 1], delta, axis.step, ctx,
                                diagnostics);
        sink(i + 1, state);
    }
}

std::vector<Complex> EnsembleDriver::source(std::span<const Complex> row, const TimeAxis& axis,
                                            unsigned threads, StepDiagnostics* diagnostics) const {
    if (row.size() != axis.size) {
        throw std::invalid_argument("EnsembleDriver::source: row does not match the time axis");
    }
    const std::size_t n = row.size();
    const std::size_t nodes = ensemble_.size();
    const auto midpoints = midpoint_fields(row);
    std::vector<Complex> rho12(nodes * n);
    std::vector<StepDiagnostics> per_node(nodes);
    detail::parallel_for(nodes, threads, [&](std::size_t k) {
        Complex* out = rho12.data() + k * n;
        evolve_node(
            k, row, midpoints, axis, [out](std::size_t i, const QdState& s) { out[i] = s.rho12; },
            &per_node[k]);
    });

    std::vector<Complex> result(n);
    const auto& w = ensemble_.weights;
    for (std::size_t i = 0; i < n; ++i) {
        Complex total{0.0, 0.0};
        for (std::size_t start = 0; start < nodes; start += detail::reduction_block) {
            const std::size_t stop = std::min(nodes, start + detail::reduction_block);
            Complex partial{0.0, 0.0};
            for (std::size_t k = start; k < stop; ++k) {
                partial += w[k] * rho12[k * n + i];
            }
            total += partial;
        }
        result[i] = total;
    }
    if (diagnostics != nullptr) {
        for (const auto& d : per_node) {
            diagnostics->renormalizations += d.renormalizations;
            diagnostics->max_trace_correction =
                std::max(diagnostics->max_trace_correction, d.max_trace_correction);
        }
    }
    return result;
}

std::vector<QdState> EnsembleDriver::trajectories(std::span<const Complex> row,
                                                  const TimeAxis& axis, unsigned threads) const {
    if (row.size() != axis.size) {
        throw std::invalid_argument("EnsembleDriver::trajectories: row does not match the time axis");
    }
    const std::size_t n = row.size();
    const auto midpoints = midpoint_fields(row);
    std::vector<QdState> states(ensemble_.size() * n);
    detail::parallel_for(ensemble_.size(), threads, [&](std::size_t k) {
        QdState* out = states.data() + k * n;
        evolve_node(
            k, row, midpoints, axis, [out](std::size_t i, const QdState& s) { out[i] = s; },
            nullptr);
    });
    return states;
}

SliceUpdate advance_slice(std::span<const Complex> current, std::span<const Complex> current_source,
                          double zeta, double d_zeta, double eta, const EnsembleDriver& driver,
                          const TimeAxis& axis, unsigned threads, StepDiagnostics* diagnostics) {
    const std::size_t n = current.size();
    if (current_source.size() != n || axis.size != n) {
        throw std::invalid_argument("advance_slice: field, source and axis lengths differ");
    }
    check_finite(current_source, axis, zeta, "ensemble source");

    const Complex k = Complex(0.0, -eta);
    SliceUpdate out;
    std::vector<Complex> predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
        predicted[i] = current[i] + d_zeta * k * current_source[i];
    }
    check_finite(predicted, axis, zeta + d_zeta, "predicted field");

    const auto predicted_source = driver.source(predicted, axis, threads, diagnostics);
    check_finite(predicted_source, axis, zeta + d_zeta, "ensemble source");

    out.field.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.field[i] = current[i] + (0.5 * d_zeta) * k * (current_source[i] + predicted_source[i]);
    }
    check_finite(out.field, axis, zeta + d_zeta, "field");
    out.source = driver.source(out.field, axis, threads, diagnostics);
    return out;
}

RateTableSpec rate_table_spec_for(const SimConfig& config, const DetuningEnsemble& ensemble,
                                  double mean_B) {
    const auto axis = make_time_axis(config.grid.tau_window, config.pulse.tau0,
                                     config.grid.points_per_tau0);
    const double peak = std::abs(sech_amplitude(config.pulse.area, config.pulse.tau0,
                                                config.pulse.center, axis));
    RateTableSpec spec;
    spec.n_omega = config.grid.table_omega;
    spec.n_delta = config.grid.table_delta;
    // Soliton reshaping can roughly double the input peak; keep a further 20% margin.
    spec.omega_max = std::max(2.0 * peak * mean_B * 1.2, 1e-3);
    spec.delta_span = std::max(ensemble.max_abs_detuning() * (1.0 + 1e-9), 1.0);
    return spec;
}

std::shared_ptr<const RateTable> prepare_rate_table(const SimConfig& config,
                                                    const DetuningEnsemble& ensemble,
                                                    const RunOptions& options) {
    const auto corr = CorrelationTable::build(config.bath);
    const auto spec = rate_table_spec_for(config, ensemble, corr.mean_B());
    if (options.rate_table && table_covers(*options.rate_table, spec, config.bath)) {
        return options.rate_table;
    }
    std::filesystem::path cache_file;
    if (!options.table_cache_dir.empty()) {
        cache_file = std::filesystem::path(options.table_cache_dir) /
                     ("rates-" + rate_table_cache_key(config.bath, spec) + ".bin");
        if (std::filesystem::exists(cache_file)) {
            auto loaded = std::make_shared<const RateTable>(RateTable::load(cache_file));
            if (loaded->spec() == spec && loaded->bath() == config.bath) {
                return loaded;
            }
        }
    }
    auto table = std::make_shared<const RateTable>(RateTable::build(spec, corr, options.threads));
    if (!cache_file.empty()) {
        std::filesystem::create_directories(cache_file.parent_path());
        table->save(cache_file);
    }
    return table;
}

SimulationResult run_simulation(const SimConfig& config, const RunOptions& options) {
    config.validate();
    SimulationResult result;
    result.medium = medium_params(config);
    auto ensemble = make_ensemble(config);
    result.ensemble_size = ensemble.size();

    if (config.phonons) {
        result.rate_table = prepare_rate_table(config, ensemble, options);
        result.mean_B = result.rate_table->mean_B();
    }
    result.beer_alpha =
        beer_extinction(result.medium.eta, result.medium.g_center, result.mean_B);

    const EnsembleDriver driver(std::move(ensemble), result.rate_table.get(), config.relax,
                                result.mean_B);
    const auto axis = make_time_axis(config.grid.tau_window, config.pulse.tau0,
                                     config.grid.points_per_tau0);
    result.field.tau = axis;

    // Slice width from the strongest absorption anywhere in the band.
    const double g_peak = config.ensemble.single_qd
                              ? result.medium.g_center
                              : std::max(result.medium.g_center,
                                         gaussian_profile(config.ensemble.delta_c,
                                                          config.ensemble.sigma,
                                                          config.ensemble.delta_c));
    const double alpha_slice = extinction_coefficient(result.medium.eta, g_peak);
    const double length = config.medium.length;
    std::size_t slices = 0;
    if (length > 0.0) {
        slices = static_cast<std::size_t>(
            std::max(1.0, std::ceil(alpha_slice * length / config.grid.alpha_dzeta - 1e-9)));
    }
    result.slice_count = slices;
    result.d_zeta = slices > 0 ? length / static_cast<double>(slices) : 0.0;

    std::vector<Complex> current =
        sech_envelope(config.pulse.area, config.pulse.tau0, config.pulse.center, axis);
    const std::size_t stride = std::max<std::size_t>(1, config.output.slice_stride);
    auto store = [&](double zeta, std::span<const Complex> row) {
        result.field.zeta.push_back(zeta);
        result.field.envelope.insert(result.field.envelope.end(), row.begin(), row.end());
    };

    store(0.0, current);
    result.slices.push_back(observe(current, axis, 0.0, config.area_convention));
    result.max_field = result.slices.back().peak_value;

    if (slices > 0) {
        std::vector<Complex> source;
        try {
            source = driver.source(current, axis, options.threads, &result.diagnostics);
            for (std::size_t s = 1; s <= slices; ++s) {
                const double zeta = result.d_zeta * static_cast<double>(s - 1);
                auto update = advance_slice(current, source, zeta, result.d_zeta,
                                            result.medium.eta, driver, axis, options.threads,
                                            &result.diagnostics);
                const double zeta_next = (s == slices) ? length : result.d_zeta * static_cast<double>(s);
                auto obs = observe(update.field, axis, zeta_next, config.area_convention);
                const double previous = result.slices.back().energy;
                if (previous > 0.0 && obs.energy > energy_growth_limit * previous) {
                    std::ostringstream msg;
                    msg << "slice energy grew by " << obs.energy / previous << "x at zeta = "
                        << zeta_next << " mm; reduce grid.alpha_dzeta";
                    throw NumericalError(msg.str(), obs.energy / previous);
                }
                result.max_field = std::max(result.max_field, obs.peak_value);
                result.slices.push_back(obs);
                current = std::move(update.field);
                source = std::move(update.source);
                if (s % stride == 0 || s == slices) {
                    store(zeta_next, current);
                }
            }
        } catch (const RangeError& e) {
            throw NumericalError(std::string("field left the rate-table domain (") + e.what() +
                                 "); the pulse grew beyond the tabulated Rabi frequency");
        }
    }

    if (config.phonons) {
        result.validity_metric =
            polaron_validity(result.max_field, config.bath.omega_b, result.mean_B);
        if (result.validity_metric >= validity_hard_threshold) {
            result.warnings.push_back("polaron validity metric " +
                                      std::to_string(result.validity_metric) +
                                      " >= 1: master equation outside its validity range");
        } else if (result.validity_metric >= validity_warning_threshold) {
            result.warnings.push_back("polaron validity metric " +
                                      std::to_string(result.validity_metric) +
                                      " >= 0.1: weak-field condition only marginally satisfied");
        }
    }
    if (result.diagnostics.renormalizations > 0) {
        result.warnings.push_back("trace renormalized " +
                                  std::to_string(result.diagnostics.renormalizations) +
                                  " times (largest correction " +
                                  std::to_string(result.diagnostics.max_trace_correction) + ")");
    }
    return result;
}

} // namespace sitqd
