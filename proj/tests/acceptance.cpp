// acceptance.cpp — End-to-end acceptance checks, one PASS/FAIL line per criterion
//
// Usage: sitqd_acceptance [--cache <dir>] [--threads <n>]
// Exits 0 when every criterion passes, 1 otherwise. Lines tagged INFO are recorded
// expectations that do not gate the result.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "sitqd/analysis.hpp"
#include "sitqd/bloch_dynamics.hpp"
#include "sitqd/config.hpp"
#include "sitqd/phonon_bath.hpp"
#include "sitqd/polaron_rates.hpp"
#include "sitqd/propagation.hpp"

using namespace sitqd;

namespace {

constexpr double pi = units::pi;

struct Tally {
    int passed{0};
    int failed{0};

    void check(const char* id, const std::string& name, bool ok, const std::string& detail) {
        std::printf("[%s] %-4s %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
        std::fflush(stdout);
        (ok ? passed : failed) += 1;
    }
    static void info(const std::string& name, const std::string& detail) {
        std::printf("[INFO]      %s: %s\n", name.c_str(), detail.c_str());
        std::fflush(stdout);
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Runs are memoized on the config hash so scenarios shared by several criteria run once.
class Runner {
public:
    Runner(unsigned threads, std::string cache) : threads_(threads), cache_(std::move(cache)) {}

    const SimulationResult& run(const SimConfig& c) {
        const auto key = config_hash(c);
        auto it = runs_.find(key);
        if (it == runs_.end()) {
            const auto start = std::chrono::steady_clock::now();
            RunOptions o;
            o.threads = threads_;
            o.table_cache_dir = cache_;
            it = runs_.emplace(key, run_simulation(c, o)).first;
            const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::fprintf(stderr, "  run %s: %zu slices, %.1f s\n", key.c_str(), it->second.slice_count, s);
        }
        return it->second;
    }
    unsigned threads() const { return threads_; }

private:
    unsigned threads_;
    std::string cache_;
    std::map<std::string, SimulationResult> runs_;
};

SimConfig base(bool phonons, double area = 2.0 * pi) {
    SimConfig c;
    c.phonons = phonons;
    c.pulse.area = area;
    c.output.slice_stride = 1000000;
    c.medium.length = 10.0 / medium_params(c).alpha;
    return c;
}

double delay_of(const SimulationResult& r) { return r.slices.back().peak_time - r.slices.front().peak_time; }

double deformation_of(const SimulationResult& r) {
    return 1.0 - r.slices.back().peak_value / r.slices.front().peak_value;
}

void criterion_1(Tally& t) {
    const double b = mean_displacement(PhononBathParams{});
    t.check("C1", "thermal displacement <B>(4.2 K)", std::abs(b - 0.95) <= 0.005,
            fmt("<B> = %.5f (target 0.95 +- 0.005)", b));
}

void criterion_2(Tally& t) {
    const double sigma = units::fwhm_to_sigma(units::energy_to_angular_frequency(23.5));
    const double rel = std::abs(sigma / 15.0 - 1.0);
    t.check("C2", "broadening FWHM 23.5 meV -> sigma", std::abs(sigma - 15.16) < 0.005 && rel <= 0.02,
            fmt("sigma = %.4f rad/ps, %.2f%% from 15 (limit 2%%)", sigma, 100.0 * rel));
}

void criterion_3(Tally& t) {
    const auto m = medium_params(SimConfig{});
    const double rel = std::abs(m.alpha / 10.0 - 1.0);
    t.check("C3", "extinction alpha", rel <= 0.15,
            fmt("alpha = %.4f 1/mm (eta = %.3f), %.1f%% from 10 (limit 15%%)", m.alpha, m.eta, 100.0 * rel));
    const double gamma_uev = units::energy_to_angular_frequency(2e-3);
    const double alpha_uev = extinction_coefficient(
        coupling_constant(5e20, units::transition_wavelength(1.3), gamma_uev), m.g_center);
    Tally::info("C3 expectation gamma = 2 ueV", fmt("alpha = %.2f 1/mm, %.1fx the target (expected > 5x)",
                                                    alpha_uev, alpha_uev / 10.0));
}

void criterion_4(Tally& t, Runner& runner) {
    double worst = 0.0;
    std::string detail;
    for (double theta0 : {0.1 * pi, 0.5 * pi, 1.5 * pi, 2.5 * pi}) {
        SimConfig c = base(false, theta0);
        c.area_convention = AreaConvention::signed_real;
        // The reshaped pulse is delayed past 100 ps, so the window is widened. The finer core
        // spacing moves the grid's polarization revival (2 pi / spacing after excitation) beyond it.
        c.grid.tau_window = 200.0;
        c.ensemble.resolved.core_spacing = 0.025;
        const auto m = medium_params(c);
        const double alpha_area = beer_extinction(m.eta, m.g_center, 1.0);
        c.medium.length = 10.0 / alpha_area;
        const auto& r = runner.run(c);
        double dev = 0.0;
        for (const auto& s : r.slices) {
            const double want = area_theorem_solution(theta0, r.beer_alpha, s.zeta);
            dev = std::max(dev, std::abs(s.area - want) / std::abs(want));
        }
        worst = std::max(worst, dev);
        detail += fmt("%.1fpi: %.2f%%; ", theta0 / pi, 100.0 * dev);
    }
    t.check("C4", "area theorem over alpha zeta in [0, 10]", worst <= 0.02,
            detail + fmt("worst %.2f%% (limit 2%%)", 100.0 * worst));
}

void criterion_5(Tally& t, Runner& runner) {
    const SimConfig c = base(false);
    const auto& r = runner.run(c);
    const double t2 = 1.0 / c.relax.gamma_d;
    const double want = 2.0 * pi * (1.0 - c.pulse.tau0 / t2);
    const double got = r.slices.back().area;
    const double rel = std::abs(got / want - 1.0);
    t.check("C5", "SIT stability, 2pi phonons off, alpha L = 10", rel <= 0.03,
            fmt("area %.5fpi vs 2pi(1 - tau0/T2') = %.5fpi, %.2f%% (limit 3%%)", got / pi, want / pi, 100.0 * rel));
}

void criterion_6(Tally& t, Runner& runner) {
    std::vector<double> areas;
    std::string detail;
    for (double temp : {4.2, 10.0, 20.0}) {
        SimConfig c = base(true);
        c.bath.temperature = temp;
        areas.push_back(runner.run(c).slices.back().area);
        detail += fmt("%.1f K: %.4fpi; ", temp, areas.back() / pi);
    }
    const bool above = std::all_of(areas.begin(), areas.end(), [](double a) { return a > 2.0 * pi; });
    const bool rising = areas[0] < areas[1] && areas[1] < areas[2];
    t.check("C6", "phonon-dressed area > 2pi and increasing in T", above && rising, detail);
}

void criterion_7(Tally& t, Runner& runner) {
    const auto& r = runner.run(base(true));
    const double d = delay_of(r) * units::gamma_n;
    t.check("C7", "slow-light delay, 2pi at alpha L = 10", std::abs(d - 15.0) <= 0.2 * 15.0,
            fmt("gamma_n tau_d = %.3f (target 15 +- 20%%; alpha L tau0 / 4 = %.3f)", d,
                delay_estimate(r.medium.alpha, r.field.zeta.back(), 6.373)));
}

void criterion_8(Tally& t, Runner& runner) {
    const auto& r = runner.run(base(true, 4.0 * pi));
    const auto out = r.field.row(r.field.rows() - 1);
    const auto m = detect_peaks(out, r.field.tau.step);
    bool ok = m.peak_count == 2 && std::abs(m.area / (4.0 * pi) - 1.0) <= 0.05;
    std::string detail = fmt("%.0f peaks, total %.4fpi", static_cast<double>(m.peak_count), m.area / pi);
    for (double a : m.sub_pulse_areas) {
        ok = ok && std::abs(a / (2.0 * pi) - 1.0) <= 0.10;
        detail += fmt(", sub-pulse %.4fpi", a / pi);
    }
    t.check("C8", "4pi pulse breakup", ok, detail + " (2 peaks, each 2pi +- 10%, total 4pi +- 5%)");
}

void criterion_9(Tally& t) {
    const PhononBathParams bath;
    const auto corr = CorrelationTable::build(bath);
    const KernelIntegrands integrands(corr);
    const double b = corr.mean_B();
    const auto axis = make_time_axis(120.0, 6.373, 100);
    const double amp = sech_amplitude(2.0 * pi, 6.373, 40.0, axis);
    double worst_equal = 0.0;
    bool asym = true;
    std::string detail;
    for (double tau : {30.0, 35.0, 40.0, 45.0, 50.0}) {
        const double om = amp / std::cosh((tau - 40.0) / 6.373);
        double bp = -1.0, ap = 0.0, bm = -1.0, am = 0.0;
        for (int j = -150; j <= 150; ++j) {
            const double d = 0.1 * j;
            const auto r = assemble_rates(om, d, compute_kernels(b * om, d, integrands), b);
            if (r.gamma_plus > bp) {
                bp = r.gamma_plus;
                ap = d;
            }
            if (r.gamma_minus > bm) {
                bm = r.gamma_minus;
                am = d;
            }
            if (j == 0) {
                worst_equal = std::max(worst_equal, std::abs(r.gamma_plus - r.gamma_minus) / r.gamma_plus);
            }
        }
        asym = asym && ap > 0.0 && am < 0.0;
        if (tau == 40.0) {
            detail = fmt("at tau = 40 ps argmax G+ = %+.2f, argmax G- = %+.2f rad/ps", ap, am);
        }
    }
    t.check("C9", "rate asymmetry on the (Delta, tau) domain", asym && worst_equal <= 1e-10,
            detail + fmt(", |G+ - G-|/G+ at Delta = 0: %.1e (limit 1e-10)", worst_equal));
}

struct Extrema {
    std::vector<std::pair<double, double>> maxima;
    std::vector<std::pair<double, double>> minima;
};

Extrema extrema(const std::vector<PopulationPoint>& p) {
    Extrema e;
    for (std::size_t i = 1; i + 1 < p.size(); ++i) {
        if (p[i].rho11 > p[i - 1].rho11 && p[i].rho11 >= p[i + 1].rho11) {
            e.maxima.emplace_back(p[i].area, p[i].rho11);
        }
        if (p[i].rho11 < p[i - 1].rho11 && p[i].rho11 <= p[i + 1].rho11) {
            e.minima.emplace_back(p[i].area, p[i].rho11);
        }
    }
    return e;
}

void criterion_10(Tally& t, unsigned threads) {
    SimConfig c;
    std::vector<double> areas;
    for (int i = 0; i <= 300; ++i) {
        areas.push_back(0.02 * i * pi);
    }
    const auto curve = population_vs_area_scan(areas, c.observation_time, c, false, threads);
    const auto e = extrema(curve);
    bool ok = e.maxima.size() == 3 && e.minima.size() == 2;
    std::string detail;
    for (const auto& [a, v] : e.maxima) {
        const double odd = (2.0 * std::floor(a / (2.0 * pi)) + 1.0) * pi;
        ok = ok && std::abs(a - odd) <= 0.25 * pi;
        detail += fmt("max %.2fpi (%.4f) ", a / pi, v);
    }
    for (std::size_t i = 1; i < e.maxima.size(); ++i) {
        ok = ok && e.maxima[i].second < e.maxima[i - 1].second;
    }
    for (const auto& [a, v] : e.minima) {
        detail += fmt("min %.2fpi (%.4f) ", a / pi, v);
    }
    for (std::size_t i = 1; i < e.minima.size(); ++i) {
        ok = ok && e.minima[i].second > e.minima[i - 1].second;
    }
    t.check("C10", "population Rabi scan at tau = 60 ps", ok,
            detail + "(maxima within 0.25pi of odd pi, maxima falling, minima rising)");

    const auto late = extrema(population_vs_area_scan(areas, 110.0, c, false, threads));
    std::string late_detail;
    for (const auto& [a, v] : late.maxima) {
        late_detail += fmt("max %.2fpi (%.4f) ", a / pi, v);
    }
    Tally::info("C10 observation time 110 ps", late_detail);
}

// Property suite on single-dot integrations and small runs.
void criterion_11(Tally& t, Runner& runner) {
    // Trace and positivity per step with phonon scattering, strong drive, several detunings.
    const auto corr = CorrelationTable::build(PhononBathParams{});
    RateTableSpec spec;
    spec.omega_max = 1.6;
    spec.delta_span = 20.0;
    const auto table = RateTable::build(spec, corr, runner.threads());
    double worst_trace = 0.0, worst_pos = 0.0;
    for (double delta : {-8.0, -1.0, 0.0, 0.5, 3.0}) {
        const auto column = table.column(delta);
        const StepContext ctx{&column, RelaxationParams{}, corr.mean_B()};
        QdState s;
        const double dt = 0.06373;
        for (int i = 0; i < 1883; ++i) {
            auto f = [](double tt) { return 6.0 * pi / (pi * 6.373) / std::cosh((tt - 60.0) / 6.373); };
            const double tt = i * dt;
            s = evolve_interval(s, f(tt), f(tt + 0.5 * dt), f(tt + dt), delta, dt, ctx);
            worst_trace = std::max(worst_trace, std::abs(s.trace() - 1.0));
            worst_pos = std::max({worst_pos, -s.rho11, -s.rho22, std::norm(s.rho12) - s.rho11 * s.rho22});
        }
    }
    t.check("C11a", "trace preservation per step", worst_trace <= 1e-9, fmt("max |tr - 1| = %.1e (limit 1e-9)", worst_trace));
    t.check("C11b", "positivity", worst_pos <= 1e-9, fmt("max violation = %.1e (limit 1e-9)", worst_pos));

    // RK4 order on the constant-drive problem against the closed form.
    const double om = 0.8, delta = 0.6, tt = 20.0;
    const double w = std::hypot(om, delta);
    auto err = [&](int n) {
        StepContext ctx;
        ctx.relax = {0.0, 0.0};
        QdState s;
        for (int i = 0; i < n; ++i) {
            s = step_rk4(s, om, om, om, delta, tt / n, ctx);
        }
        const double exact = om * om / (w * w) * std::pow(std::sin(w * tt / 2.0), 2);
        return std::abs(s.rho11 - exact);
    };
    const double order = std::log2(err(100) / err(200));
    t.check("C11c", "RK4 order on the constant-drive oracle", std::abs(order - 4.0) <= 0.3,
            fmt("measured order %.3f (4 +- 0.3)", order));

    // Empty medium leaves the envelope unchanged in the retarded frame.
    SimConfig empty = base(false);
    empty.medium.density = 0.0;
    empty.medium.length = 1.0;
    const auto& r = runner.run(empty);
    double diff = 0.0;
    const auto a = r.field.row(0);
    const auto b = r.field.row(r.field.rows() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
    }
    t.check("C11d", "N = 0 medium is zeta-invariant", diff <= 1e-12, fmt("max |dOmega| = %.1e (limit 1e-12)", diff));

    // Quadrature self-convergence: bath integrals, rate-table interpolation, time and space grids.
    BathQuadrature tight;
    tight.relative_tolerance = 1e-12;
    tight.cutoff_factor = 10.0;
    const double b0 = mean_displacement(PhononBathParams{});
    const double b1 = mean_displacement(PhononBathParams{}, tight);
    const double dphi = std::abs(correlation_function(1.0, PhononBathParams{}) -
                                 correlation_function(1.0, PhononBathParams{}, tight)) /
                        std::abs(correlation_function(0.0, PhononBathParams{}));
    const double db = std::abs(b1 / b0 - 1.0);
    t.check("C11e", "bath quadrature self-convergence", db < 1e-8 && dphi < 1e-8,
            fmt("d<B>/<B> = %.1e, dphi/phi(0) = %.1e (limit 1e-8)", db, dphi));

    const SimConfig coarse = base(false);
    SimConfig fine = coarse;
    fine.grid.points_per_tau0 = 200;
    fine.grid.alpha_dzeta = 0.025;
    const double a0 = runner.run(coarse).slices.back().area;
    const double a1 = runner.run(fine).slices.back().area;
    const double dgrid = std::abs(a1 / a0 - 1.0);
    t.check("C11f", "grid convergence, halved d tau and d zeta", dgrid < 0.005,
            fmt("transmitted area %.6fpi -> %.6fpi, %.3f%% (limit 0.5%%)", a0 / pi, a1 / pi, 100.0 * dgrid));
}

void figure_checks(Tally& t, Runner& runner) {
    // Fig. 4: absorption before the pulse centre, gain after it, at resonance.
    SimConfig c;
    const std::vector<double> times{30.0, 50.0};
    const auto spec = coherence_spectrum_scan(times, c, runner.threads());
    const std::size_t centre = spec[0].delta.size() / 2;
    const double im30 = spec[0].rho12[centre].imag();
    const double im50 = spec[1].rho12[centre].imag();
    t.check("F4", "coherence sign flips between tau = 30 and 50 ps", im30 * im50 < 0.0,
            fmt("Im rho12(0) = %+.4f at 30 ps, %+.4f at 50 ps", im30, im50));

    // Fig. 6: the peak falls monotonically with distance.
    const auto& r6 = runner.run(base(true));
    bool monotone = true;
    for (std::size_t s = 1; s < r6.slices.size(); ++s) {
        monotone = monotone && r6.slices[s].peak_value <= r6.slices[s - 1].peak_value;
    }
    t.check("F6", "2pi peak decreases monotonically with zeta", monotone,
            fmt("peak %.4f -> %.4f rad/ps over %.0f slices", r6.slices.front().peak_value,
                r6.slices.back().peak_value, static_cast<double>(r6.slice_count)));

    // Fig. 8: delay shrinks as the inhomogeneous width grows at fixed length.
    std::vector<double> delays;
    std::string d8;
    for (double sigma : {10.0, 15.0, 20.0}) {
        SimConfig s = base(true);
        s.ensemble.sigma = sigma;
        delays.push_back(delay_of(runner.run(s)));
        d8 += fmt("sigma %.0f: %.2f ps; ", sigma, delays.back());
    }
    t.check("F8", "delay decreases with sigma", delays[0] > delays[1] && delays[1] > delays[2], d8);

    // Figs. 9 and 10: deformation grows with temperature and with coupling.
    auto at_50 = [](SimConfig s) {
        s.medium.length = 50.0 * units::gamma_n / medium_params(s).eta;
        return s;
    };
    std::vector<double> def9;
    std::string d9;
    for (double temp : {-1.0, 4.2, 10.0, 20.0}) {
        SimConfig s = at_50(base(temp >= 0.0));
        if (temp >= 0.0) {
            s.bath.temperature = temp;
        }
        def9.push_back(deformation_of(runner.run(s)));
        d9 += temp < 0.0 ? fmt("off: %.4f; ", def9.back()) : fmt("%.1f K: %.4f; ", temp, def9.back());
    }
    t.check("F9", "deformation increases with T", std::is_sorted(def9.begin(), def9.end()) &&
                                                      std::adjacent_find(def9.begin(), def9.end()) == def9.end(),
            d9);
    std::vector<double> def10;
    std::string d10;
    for (double ap : {0.03, 0.06, 0.12}) {
        SimConfig s = at_50(base(true));
        s.bath.alpha_p = ap;
        def10.push_back(deformation_of(runner.run(s)));
        d10 += fmt("alpha_p %.2f: %.4f; ", ap, def10.back());
    }
    t.check("F10", "deformation increases with alpha_p", def10[0] < def10[1] && def10[1] < def10[2], d10);
}

} // namespace

int main(int argc, char** argv) {
    std::string cache;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    for (int i = 1; i + 1 < argc; i += 2) {
        if (std::strcmp(argv[i], "--cache") == 0) {
            cache = argv[i + 1];
        } else if (std::strcmp(argv[i], "--threads") == 0) {
            threads = static_cast<unsigned>(std::max(1, std::atoi(argv[i + 1])));
        }
    }
    Tally t;
    Runner runner(threads, cache);
    criterion_1(t);
    criterion_2(t);
    criterion_3(t);
    criterion_9(t);
    criterion_11(t, runner);
    criterion_5(t, runner);
    criterion_4(t, runner);
    criterion_6(t, runner);
    criterion_7(t, runner);
    criterion_8(t, runner);
    criterion_10(t, threads);
    figure_checks(t, runner);
    std::printf("acceptance: %d passed, %d failed\n", t.passed, t.failed);
    return t.failed == 0 ? 0 : 1;
}
