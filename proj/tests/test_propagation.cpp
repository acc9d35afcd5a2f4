// test_propagation.cpp — Input pulse, coupling constant and the slice march

#include <doctest.h>

#include <cmath>
#include <limits>

#include "sitqd/analysis.hpp"
#include "sitqd/config.hpp"
#include "sitqd/error.hpp"
#include "sitqd/propagation.hpp"

using namespace sitqd;

namespace {

TimeAxis default_axis() { return make_time_axis(120.0, 6.373, 100); }

SimConfig quick_config() {
    SimConfig c;
    c.phonons = false;
    c.output.slice_stride = 1000;
    return c;
}

} // namespace

TEST_SUITE("propagation") {

TEST_CASE("time axis") {
    const auto axis = default_axis();
    CHECK(axis.step == doctest::Approx(0.06373));
    CHECK(axis.size == 1883);
    CHECK(axis.end() <= 120.0);
    CHECK(axis.end() > 120.0 - axis.step);
    CHECK(axis.index_of(40.0) == 628);
}

TEST_CASE("sech input pulse") {
    const auto axis = default_axis();
    const double amp = sech_amplitude(2.0 * units::pi, 6.373, 40.0, axis);
    CHECK(amp == doctest::Approx(2.0 / 6.373).epsilon(1e-3));
    CHECK(amp == doctest::Approx(0.3138).epsilon(1e-3));
    CHECK(units::angular_frequency_to_energy(amp) == doctest::Approx(0.2066).epsilon(2e-3));
    for (const auto& v : sech_envelope(0.0, 6.373, 40.0, axis)) {
        CHECK(v == Complex{0.0, 0.0});
    }
    for (double theta : {0.1 * units::pi, 2.0 * units::pi, 4.0 * units::pi}) {
        const auto row = sech_envelope(theta, 6.373, 40.0, axis);
        CHECK(pulse_area(row, axis.step) == doctest::Approx(theta).epsilon(1e-6));
    }
}

TEST_CASE("coupling constant") {
    // 3 N lambda^2 gamma / 4 pi with N in mm^-3 and lambda in mm.
    const double n_mm3 = 5e20 * 1e-9;
    const double lambda_mm = 953.7 * 1e-6;
    const double want = 3.0 * n_mm3 * lambda_mm * lambda_mm * 0.0005 / (4.0 * units::pi);
    CHECK(coupling_constant(5e20, 953.7, 0.0005) == doctest::Approx(want).epsilon(1e-12));
    CHECK(coupling_constant(5e20, 953.7, 0.0005) == doctest::Approx(54.3).epsilon(2e-3));
    CHECK(coupling_constant(1e21, 953.7, 0.0005) == doctest::Approx(2.0 * want));
}

TEST_CASE("extinction of the default medium") {
    const auto m = medium_params(SimConfig{});
    CHECK(m.eta == doctest::Approx(54.3).epsilon(2e-3));
    CHECK(m.g_center == doctest::Approx(1.0 / (15.16 * std::sqrt(2.0 * units::pi))).epsilon(1e-3));
    CHECK(m.alpha == doctest::Approx(2.0 * units::pi * m.eta * m.g_center));
    CHECK(m.alpha == doctest::Approx(9.0).epsilon(0.01));
    CHECK(std::abs(m.alpha / 10.0 - 1.0) < 0.15);
}

TEST_CASE("midpoint interpolation is exact for cubics") {
    std::vector<Complex> row;
    auto f = [](double x) { return Complex{1.0 + x - 0.3 * x * x + 0.02 * x * x * x, 0.5 * x}; };
    for (int i = 0; i < 12; ++i) {
        row.push_back(f(i));
    }
    const auto mid = midpoint_fields(row);
    REQUIRE(mid.size() == row.size() - 1);
    for (std::size_t i = 1; i + 2 < row.size(); ++i) {
        CHECK(std::abs(mid[i] - f(i + 0.5)) < 1e-12);
    }
}

TEST_CASE("ground-state medium radiates nothing without a field") {
    const auto axis = default_axis();
    const std::vector<Complex> zero(axis.size);
    const EnsembleDriver driver(build_resolved_ensemble(15.16, 0.0), nullptr, RelaxationParams{}, 1.0);
    for (const auto& v : driver.source(zero, axis)) {
        CHECK(v == Complex{0.0, 0.0});
    }
}

TEST_CASE("ensemble source is identical for any thread count") {
    const auto axis = default_axis();
    const auto row = sech_envelope(2.0 * units::pi, 6.373, 40.0, axis);
    const EnsembleDriver driver(build_resolved_ensemble(15.16, 0.0), nullptr, RelaxationParams{}, 1.0);
    const auto one = driver.source(row, axis, 1);
    const auto three = driver.source(row, axis, 3);
    CHECK(one == three);
}

TEST_CASE("non-finite values are reported with their location") {
    const auto axis = default_axis();
    const auto row = sech_envelope(2.0 * units::pi, 6.373, 40.0, axis);
    std::vector<Complex> source(axis.size);
    source[700] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    const EnsembleDriver driver(single_detuning(0.0), nullptr, RelaxationParams{}, 1.0);
    try {
        (void)advance_slice(row, source, 0.25, 0.01, 54.0, driver, axis);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        const std::string what = e.what();
        CHECK(what.find("zeta") != std::string::npos);
        CHECK(what.find("tau") != std::string::npos);
    }
}

TEST_CASE("zero length returns the input row") {
    auto c = quick_config();
    c.medium.length = 0.0;
    const auto r = run_simulation(c);
    CHECK(r.slice_count == 0);
    REQUIRE(r.field.rows() == 1);
    const auto input = sech_envelope(c.pulse.area, c.pulse.tau0, c.pulse.center, r.field.tau);
    const auto row = r.field.row(0);
    CHECK(std::equal(row.begin(), row.end(), input.begin(), input.end()));
}

TEST_CASE("empty medium leaves the envelope unchanged in the retarded frame") {
    auto c = quick_config();
    c.medium.density = 0.0;
    c.medium.length = 2.0;
    c.grid.alpha_dzeta = 0.05;
    const auto r = run_simulation(c);
    const auto first = r.field.row(0);
    const auto last = r.field.row(r.field.rows() - 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        worst = std::max(worst, std::abs(first[i] - last[i]));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("weak pulse follows the area theorem over a short medium") {
    auto c = quick_config();
    c.pulse.area = 0.1 * units::pi;
    const auto m = medium_params(c);
    c.medium.length = 2.0 / beer_extinction(m.eta, m.g_center, 1.0);
    const auto r = run_simulation(c);
    for (const auto& s : r.slices) {
        const double want = area_theorem_solution(c.pulse.area, r.beer_alpha, s.zeta);
        CHECK(s.area == doctest::Approx(want).epsilon(0.02));
    }
    CHECK(r.slices.back().area < r.slices.front().area);
}

TEST_CASE("run bookkeeping") {
    auto c = quick_config();
    c.medium.length = 0.1;
    c.output.slice_stride = 3;
    const auto r = run_simulation(c);
    CHECK(r.slice_count == static_cast<std::size_t>(std::ceil(r.medium.alpha * 0.1 / 0.05 - 1e-9)));
    CHECK(r.slices.size() == r.slice_count + 1);
    CHECK(r.field.zeta.back() == doctest::Approx(0.1));
    CHECK(r.field.rows() == 1 + r.slice_count / 3 + (r.slice_count % 3 ? 1 : 0));
    CHECK(r.validity_metric == 0.0);
    CHECK(r.rate_table == nullptr);
}

}
