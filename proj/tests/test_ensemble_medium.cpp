// test_ensemble_medium.cpp — Gaussian broadening, quadrature nodes and the coherence sum

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sitqd/config.hpp"
#include "sitqd/ensemble_medium.hpp"
#include "sitqd/error.hpp"
#include "sitqd/propagation.hpp"

using namespace sitqd;

namespace {

double weight_sum(const DetuningEnsemble& e) { return std::accumulate(e.weights.begin(), e.weights.end(), 0.0); }

// Gaussian moment <x^2k> = (2k - 1)!! sigma^2k.
double gaussian_moment(int k, double sigma) {
    double m = 1.0;
    for (int j = 2 * k - 1; j > 0; j -= 2) {
        m *= j;
    }
    return m * std::pow(sigma, 2 * k);
}

double moment(const DetuningEnsemble& e, int power) {
    double s = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        s += e.weights[k] * std::pow(e.nodes[k] - e.delta_c, power);
    }
    return s;
}

std::vector<Complex> zeta0_source(const DetuningEnsemble& e) {
    SimConfig c;
    c.phonons = false;
    const auto axis = make_time_axis(c.grid.tau_window, c.pulse.tau0, c.grid.points_per_tau0);
    const auto row = sech_envelope(c.pulse.area, c.pulse.tau0, c.pulse.center, axis);
    const EnsembleDriver driver(e, nullptr, c.relax, 1.0);
    return driver.source(row, axis);
}

} // namespace

TEST_SUITE("ensemble_medium") {

TEST_CASE("Gaussian profile") {
    CHECK(gaussian_profile(0.0, 15.0, 0.0) == doctest::Approx(1.0 / (15.0 * std::sqrt(2.0 * units::pi))));
    CHECK(gaussian_profile(0.0, 15.0, 0.0) == doctest::Approx(0.02660).epsilon(1e-3));
    CHECK(gaussian_profile(1e4, 15.0, 0.0) == 0.0);
    CHECK(gaussian_profile(-1e4, 15.0, 0.0) == 0.0);
    CHECK(gaussian_profile(3.0, 2.0, 3.0) == doctest::Approx(gaussian_profile(0.0, 2.0, 0.0)));
    CHECK_THROWS_AS(gaussian_profile(0.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(gaussian_profile(0.0, -1.0, 0.0), std::domain_error);
}

TEST_CASE("three-point Gauss-Hermite rule") {
    // Textbook probabilists' rule: nodes 0, +-sqrt(3); weights 2/3, 1/6, 1/6.
    const auto e = build_ensemble(1.0, 0.0, 3);
    REQUIRE(e.size() == 3);
    CHECK(e.nodes[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-12));
    CHECK(std::abs(e.nodes[1]) < 1e-14);
    CHECK(e.nodes[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(e.weights[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(e.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(e.weights[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    const auto shifted = build_ensemble(2.0, 5.0, 3);
    CHECK(shifted.nodes[2] == doctest::Approx(5.0 + 2.0 * std::sqrt(3.0)));
}

TEST_CASE("Gauss-Hermite integrates Gaussian moments exactly") {
    for (std::size_t n : {3u, 8u, 21u, 63u}) {
        const auto e = build_ensemble(15.16, 0.0, n);
        CHECK(weight_sum(e) == doctest::Approx(1.0).epsilon(1e-13));
        for (int k = 1; 2 * k <= static_cast<int>(2 * n - 1) && k <= 6; ++k) {
            CHECK(moment(e, 2 * k) == doctest::Approx(gaussian_moment(k, 15.16)).epsilon(1e-9));
        }
        CHECK(std::abs(moment(e, 1)) < 1e-12 * 15.16);
    }
    CHECK_THROWS_AS(build_ensemble(1.0, 0.0, 2), ConfigError);
}

TEST_CASE("every scheme is normalized and mirror-symmetric") {
    const double sigma = 15.16;
    const DetuningEnsemble ensembles[] = {build_ensemble(sigma, 0.0, 63), build_resolved_ensemble(sigma, 0.0),
                                          build_trapezoid_ensemble(sigma, 0.0, 201)};
    for (const auto& e : ensembles) {
        CHECK(weight_sum(e) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::is_sorted(e.nodes.begin(), e.nodes.end()));
        for (std::size_t k = 0; k < e.size(); ++k) {
            CHECK(e.nodes[k] == doctest::Approx(-e.nodes[e.size() - 1 - k]).epsilon(1e-12));
            CHECK(e.weights[k] == doctest::Approx(e.weights[e.size() - 1 - k]).epsilon(1e-12));
        }
        CHECK(moment(e, 2) == doctest::Approx(sigma * sigma).epsilon(5e-3));
    }
}

TEST_CASE("resolved grid layout") {
    const auto e = build_resolved_ensemble(15.16, 0.0);
    CHECK(e.size() == 255);
    CHECK(e.max_abs_detuning() < 6.0 * 15.16);
    CHECK(e.max_abs_detuning() > 4.0 * 15.16);
    const std::size_t mid = e.size() / 2;
    CHECK(e.nodes[mid] == 0.0);
    CHECK(e.nodes[mid + 1] - e.nodes[mid] == doctest::Approx(0.04).epsilon(1e-6));
}

TEST_CASE("single detuning") {
    const auto e = single_detuning(0.3);
    CHECK(e.size() == 1);
    CHECK(e.nodes[0] == 0.3);
    CHECK(e.weights[0] == 1.0);
}

TEST_CASE("macroscopic coherence") {
    const auto e = build_ensemble(1.0, 0.0, 9);
    std::vector<QdState> states(e.size());
    CHECK(macroscopic_coherence(states, e) == Complex{0.0, 0.0});
    for (auto& s : states) {
        s.rho12 = {0.1, -0.2};
    }
    const auto c = macroscopic_coherence(states, e);
    CHECK(c.real() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(c.imag() == doctest::Approx(-0.2).epsilon(1e-14));
    for (std::size_t k = 0; k < e.size(); ++k) {
        states[k].rho12 = {0.0, e.nodes[k]};
    }
    CHECK(std::abs(macroscopic_coherence(states, e)) < 1e-15);
    states.pop_back();
    CHECK_THROWS_AS(macroscopic_coherence(states, e), std::invalid_argument);
}

TEST_CASE("weighted sum is independent of how terms are grouped") {
    std::vector<Complex> v;
    std::vector<double> w;
    for (int k = 0; k < 100; ++k) {
        v.emplace_back(std::sin(k * 0.7), std::cos(k * 1.3));
        w.push_back(1.0 / (1.0 + k));
    }
    const auto a = weighted_sum(v, w);
    Complex b{0.0, 0.0};
    for (std::size_t k = 0; k < v.size(); ++k) {
        b += w[k] * v[k];
    }
    CHECK(std::abs(a - b) < 1e-13);
    CHECK(weighted_sum(v, w) == a);
}

TEST_CASE("refining the resolved grid leaves the ensemble source unchanged") {
    const auto base = zeta0_source(build_resolved_ensemble(15.16, 0.0));
    ResolvedGrid fine;
    fine.core_spacing = 0.02;
    fine.tail_growth = 1.12;
    const auto refined = zeta0_source(build_resolved_ensemble(15.16, 0.0, fine));
    double peak = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        peak = std::max(peak, std::abs(refined[i]));
        worst = std::max(worst, std::abs(base[i] - refined[i]));
    }
    CHECK(worst < 1e-2 * peak);
}

TEST_CASE("narrow ensemble reproduces the single dot") {
    const auto single = zeta0_source(single_detuning(0.0));
    const auto narrow = zeta0_source(build_ensemble(1e-9, 0.0, 3));
    for (std::size_t i = 0; i < single.size(); i += 97) {
        CHECK(std::abs(single[i] - narrow[i]) < 1e-9);
    }
}

TEST_CASE("scheme names") {
    for (auto s : {EnsembleScheme::resolved, EnsembleScheme::gauss_hermite, EnsembleScheme::trapezoid}) {
        CHECK(ensemble_scheme_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(ensemble_scheme_from_string("simpson"), std::invalid_argument);
}

}
