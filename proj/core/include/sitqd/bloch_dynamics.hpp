// bloch_dynamics.hpp — One detuning class under the simplified polaron master equation
//
// Basis {|1> exciton, |2> ground}; H_s / hbar = -Delta sigma+sigma- + (<B>/2)(Omega sigma+ + h.c.).
// Writing a = rho11, b = rho22, c = rho12 and Omega_e = <B> Omega, the component equations are
//
//   da/dt = -Im(conj(Omega_e) c) - gamma a + G+ b - G- a - 2 Ggu+ Im c - 2 Ggu- Re c
//   db/dt = -da/dt
//   dc/dt = i (Delta + Dpm) c + i (Omega_e / 2)(a - b)
//           - (gamma + gamma_d + G+ + G-) c / 2 - (Gcd + i Gsd) conj(c)
//
// with G+- the phonon pumping/decay rates, Gcd/Gsd the conjugate-coupling dephasing pair,
// Dpm the phonon-induced detuning and Ggu+- the population-coherence mixing rates.

#pragma once

#include <complex>
#include <cstddef>

#include "sitqd/phonon_bath.hpp"
#include "sitqd/polaron_rates.hpp"

namespace sitqd {

struct QdState {
    double rho11{0.0};
    double rho22{1.0};
    Complex rho12{0.0, 0.0};

    static QdState ground() noexcept { return {}; }
    double trace() const noexcept { return rho11 + rho22; }
};

struct RelaxationParams {
    double gamma{0.0005};    // radiative decay, 1/ps (2 ns lifetime)
    double gamma_d{0.0005};  // pure dephasing, 1/ps

    void validate() const;
    bool operator==(const RelaxationParams&) const = default;
};

QdState master_equation_rhs(const QdState& state, Complex omega, double delta,
                            const PhononRates& rates, const RelaxationParams& relax,
                            double mean_B);

// Everything a step needs besides the state and the field samples.
// A null `rates` switches the phonon scattering terms off (mean_B still scales the drive).
struct StepContext {
    const RateColumn* rates{nullptr};
    RelaxationParams relax{};
    double mean_B{1.0};
};

struct StepDiagnostics {
    std::size_t renormalizations{0};
    double max_trace_correction{0.0};
};

inline constexpr double trace_renormalization_threshold = 1e-12;
inline constexpr double invariant_failure_tolerance = 1e-6;

// Classical RK4 over [t, t + dt] with fields sampled at t, t + dt/2, t + dt.
// Throws NumericalError if the result violates trace or positivity by more than 1e-6.
QdState step_rk4(const QdState& state, Complex field_at_t, Complex field_at_half,
                 Complex field_at_next, double delta, double dt, const StepContext& ctx,
                 StepDiagnostics* diagnostics = nullptr);

// Largest RK4 substep used by evolve_interval, in units of 1/|Delta|.
inline constexpr double max_phase_per_substep = 0.5;

// Number of RK4 substeps evolve_interval uses for this detuning and interval.
std::size_t substep_count(double delta, double dt) noexcept;

// Advances over [t, t + dt] with substep_count(delta, dt) RK4 steps; inside the interval the
// field follows the quadratic through the three samples.
QdState evolve_interval(const QdState& state, Complex field_at_t, Complex field_at_half,
                        Complex field_at_next, double delta, double dt, const StepContext& ctx,
                        StepDiagnostics* diagnostics = nullptr);

} // namespace sitqd
