// analysis.cpp — Areas, peaks and zeta = 0 scans

#include "sitqd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sitqd/config.hpp"
#include "sitqd/propagation.hpp"
#include "sitqd/units.hpp"

namespace sitqd {

namespace {

double trapezoid_modulus(std::span<const Complex> row, std::size_t begin, std::size_t end,
                         double step) {
    // Integral over samples [begin, end] inclusive.
    if (end <= begin) {
        return 0.0;
    }
    double sum = 0.5 * (std::abs(row[begin]) + std::abs(row[end]));
    for (std::size_t i = begin + 1; i < end; ++i) {
        sum += std::abs(row[i]);
    }
    return sum * step;
}

double half_max_crossing(double t0, double t1, double v0, double v1, double level) {
    if (v1 == v0) {
        return t0;
    }
    return t0 + (level - v0) / (v1 - v0) * (t1 - t0);
}

} // namespace

std::string_view to_string(AreaConvention convention) noexcept {
    return convention == AreaConvention::signed_real ? "signed_real" : "modulus";
}

AreaConvention area_convention_from_string(std::string_view name) {
    if (name == "modulus") {
        return AreaConvention::modulus;
    }
    if (name == "signed_real") {
        return AreaConvention::signed_real;
    }
    throw std::invalid_argument("unknown area convention '" + std::string(name) +
                                "' (expected modulus or signed_real)");
}

double pulse_area(std::span<const Complex> row, double tau_step, AreaConvention convention) {
    if (row.size() < 2) {
        return 0.0;
    }
    if (convention == AreaConvention::modulus) {
        return trapezoid_modulus(row, 0, row.size() - 1, tau_step);
    }
    double sum = 0.5 * (row.front().real() + row.back().real());
    for (std::size_t i = 1; i + 1 < row.size(); ++i) {
        sum += row[i].real();
    }
    return sum * tau_step;
}

double area_theorem_solution(double theta0, double alpha, double z) {
    const double n = std::round(theta0 / (2.0 * units::pi));
    const double x = 0.5 * theta0 - n * units::pi;
    if (std::abs(std::abs(x) - 0.5 * units::pi) < 1e-12) {
        throw std::domain_error(
            "area_theorem_solution: odd multiples of pi are unstable fixed points with no "
            "branch-continuous continuation");
    }
    return 2.0 * (n * units::pi + std::atan(std::tan(x) * std::exp(-0.5 * alpha * z)));
}

double extinction_coefficient(double eta, double g_at_center) {
    return 2.0 * units::pi * eta * g_at_center;
}

double beer_extinction(double eta, double g_at_center, double mean_B) {
    return units::pi * eta * g_at_center * mean_B;
}

double delay_estimate(double alpha, double length, double tau0) { return alpha * length * tau0 / 4.0; }

PulseMetrics detect_peaks(std::span<const Complex> row, double tau_step, double threshold_fraction) {
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
        throw std::invalid_argument("detect_peaks: threshold_fraction must lie in (0, 1)");
    }
    PulseMetrics m;
    const std::size_t n = row.size();
    if (n == 0) {
        return m;
    }
    std::vector<double> mag(n);
    std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = std::abs(row[i]);
        if (mag[i] > mag[arg]) {
            arg = i;
        }
    }
    m.area = n > 1 ? trapezoid_modulus(row, 0, n - 1, tau_step) : 0.0;
    m.peak_value = mag[arg];
    m.peak_time = tau_step * static_cast<double>(arg);
    if (m.peak_value <= 0.0) {
        return m;
    }

    const double half = 0.5 * m.peak_value;
    std::size_t lo = arg;
    while (lo > 0 && mag[lo] > half) {
        --lo;
    }
    std::size_t hi = arg;
    while (hi + 1 < n && mag[hi] > half) {
        ++hi;
    }
    const double t_lo = mag[lo] <= half ? half_max_crossing(tau_step * static_cast<double>(lo),
                                                            tau_step * static_cast<double>(lo + 1),
                                                            mag[lo], mag[lo + 1], half)
                                        : 0.0;
    const double t_hi = mag[hi] <= half ? half_max_crossing(tau_step * static_cast<double>(hi - 1),
                                                            tau_step * static_cast<double>(hi),
                                                            mag[hi - 1], mag[hi], half)
                                        : tau_step * static_cast<double>(n - 1);
    m.fwhm = t_hi - t_lo;

    // Local maxima above threshold; a plateau counts once, at its first sample.
    const double level = threshold_fraction * m.peak_value;
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < n; ++i) {
        if (mag[i] < level) {
            continue;
        }
        const bool left = (i == 0) || mag[i] > mag[i - 1];
        std::size_t j = i;
        while (j + 1 < n && mag[j + 1] == mag[i]) {
            ++j;
        }
        const bool right = (j + 1 == n) || mag[i] > mag[j + 1];
        if (left && right) {
            peaks.push_back(i);
        }
        i = j;
    }
    m.peak_count = peaks.size();
    for (std::size_t p : peaks) {
        m.peak_times.push_back(tau_step * static_cast<double>(p));
    }
    if (peaks.empty()) {
        return m;
    }

    std::vector<std::size_t> cuts{0};
    for (std::size_t q = 0; q + 1 < peaks.size(); ++q) {
        auto first = mag.begin() + static_cast<std::ptrdiff_t>(peaks[q]);
        auto last = mag.begin() + static_cast<std::ptrdiff_t>(peaks[q + 1]) + 1;
        cuts.push_back(static_cast<std::size_t>(std::min_element(first, last) - mag.begin()));
    }
    cuts.push_back(n - 1);
    for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
        m.sub_pulse_areas.push_back(trapezoid_modulus(row, cuts[q], cuts[q + 1], tau_step));
    }
    return m;
}

std::vector<PopulationPoint> population_vs_area_scan(std::span<const double> areas,
                                                     double observation_time,
                                                     const SimConfig& config,
                                                     bool ensemble_average, unsigned threads) {
    config.validate();
    const auto axis = make_time_axis(config.grid.tau_window, config.pulse.tau0,
                                     config.grid.points_per_tau0);
    if (!(observation_time >= 0.0) || observation_time > axis.end()) {
        throw std::invalid_argument("population_vs_area_scan: observation time outside the window");
    }
    SimConfig scan = config;
    scan.ensemble.single_qd = !ensemble_average;
    double max_area = 0.0;
    for (double a : areas) {
        max_area = std::max(max_area, std::abs(a));
    }
    scan.pulse.area = std::max(max_area, 1e-6);

    auto ensemble = make_ensemble(scan);
    std::shared_ptr<const RateTable> table;
    double mean_B = 1.0;
    if (scan.phonons) {
        RunOptions options;
        options.threads = threads;
        table = prepare_rate_table(scan, ensemble, options);
        mean_B = table->mean_B();
    }
    const EnsembleDriver driver(std::move(ensemble), table.get(), scan.relax, mean_B);
    const std::size_t at = axis.index_of(observation_time);
    const auto& weights = driver.ensemble().weights;

    std::vector<PopulationPoint> curve;
    curve.reserve(areas.size());
    for (double area : areas) {
        const auto row = sech_envelope(area, scan.pulse.tau0, scan.pulse.center, axis);
        const auto states = driver.trajectories(row, axis, threads);
        double rho11 = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
            rho11 += weights[k] * states[k * axis.size + at].rho11;
        }
        curve.push_back({area, rho11});
    }
    return curve;
}

std::vector<CoherenceSpectrum> coherence_spectrum_scan(std::span<const double> times,
                                                       const SimConfig& config, unsigned threads) {
    config.validate();
    const auto axis = make_time_axis(config.grid.tau_window, config.pulse.tau0,
                                     config.grid.points_per_tau0);
    for (double t : times) {
        if (!(t >= 0.0) || t > axis.end()) {
            throw std::invalid_argument("coherence_spectrum_scan: time outside the window");
        }
    }
    auto ensemble = make_ensemble(config);
    std::shared_ptr<const RateTable> table;
    double mean_B = 1.0;
    if (config.phonons) {
        RunOptions options;
        options.threads = threads;
        table = prepare_rate_table(config, ensemble, options);
        mean_B = table->mean_B();
    }
    const EnsembleDriver driver(std::move(ensemble), table.get(), config.relax, mean_B);
    const auto row = sech_envelope(config.pulse.area, config.pulse.tau0, config.pulse.center, axis);
    const auto states = driver.trajectories(row, axis, threads);

    std::vector<CoherenceSpectrum> out;
    const auto& nodes = driver.ensemble().nodes;
    for (double t : times) {
        CoherenceSpectrum spec;
        spec.time = t;
        spec.delta = nodes;
        spec.rho12.resize(nodes.size());
        const std::size_t at = axis.index_of(t);
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            spec.rho12[k] = states[k * axis.size + at].rho12;
        }
        out.push_back(std::move(spec));
    }
    return out;
}

} // namespace sitqd
