// bloch_dynamics.cpp — Master-equation right-hand side and RK4 stepping

#include "sitqd/bloch_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sitqd/error.hpp"

namespace sitqd {

namespace {

constexpr Complex i_unit{0.0, 1.0};

QdState axpy(const QdState& s, double h, const QdState& k) noexcept {
    return {s.rho11 + h * k.rho11, s.rho22 + h * k.rho22, s.rho12 + h * k.rho12};
}

PhononRates rates_at(const StepContext& ctx, Complex omega) {
    if (ctx.rates == nullptr) {
        return {};
    }
    return ctx.rates->rates(omega, ctx.mean_B);
}

} // namespace

void RelaxationParams::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw std::domain_error("gamma must be >= 0");
    }
    if (!(gamma_d >= 0.0) || !std::isfinite(gamma_d)) {
        throw std::domain_error("gamma_d must be >= 0");
    }
}

QdState master_equation_rhs(const QdState& state, Complex omega, double delta,
                            const PhononRates& rates, const RelaxationParams& relax,
                            double mean_B) {
    const double a = state.rho11;
    const double b = state.rho22;
    const Complex c = state.rho12;
    const Complex omega_e = mean_B * omega;

    const double da = -std::imag(std::conj(omega_e) * c) - relax.gamma * a + rates.gamma_plus * b -
                      rates.gamma_minus * a - 2.0 * rates.gamma_gu_plus * c.imag() -
                      2.0 * rates.gamma_gu_minus * c.real();

    const double decay = 0.5 * (relax.gamma + relax.gamma_d + rates.gamma_plus + rates.gamma_minus);
    const Complex dc = i_unit * (delta + rates.delta_pm) * c + i_unit * (0.5 * omega_e) * (a - b) -
                       decay * c - Complex(rates.gamma_cd, rates.gamma_sd) * std::conj(c);

    return {da, -da, dc};
}

QdState step_rk4(const QdState& state, Complex field_at_t, Complex field_at_half,
                 Complex field_at_next, double delta, double dt, const StepContext& ctx,
                 StepDiagnostics* diagnostics) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step_rk4: dt must be > 0");
    }
    const auto& relax = ctx.relax;
    const double mb = ctx.mean_B;
    const PhononRates r0 = rates_at(ctx, field_at_t);
    const PhononRates rh = rates_at(ctx, field_at_half);
    const PhononRates r1 = rates_at(ctx, field_at_next);

    const QdState k1 = master_equation_rhs(state, field_at_t, delta, r0, relax, mb);
    const QdState k2 = master_equation_rhs(axpy(state, 0.5 * dt, k1), field_at_half, delta, rh, relax, mb);
    const QdState k3 = master_equation_rhs(axpy(state, 0.5 * dt, k2), field_at_half, delta, rh, relax, mb);
    const QdState k4 = master_equation_rhs(axpy(state, dt, k3), field_at_next, delta, r1, relax, mb);

    const double w = dt / 6.0;
    QdState next{state.rho11 + w * (k1.rho11 + 2.0 * k2.rho11 + 2.0 * k3.rho11 + k4.rho11),
                 state.rho22 + w * (k1.rho22 + 2.0 * k2.rho22 + 2.0 * k3.rho22 + k4.rho22),
                 state.rho12 + w * (k1.rho12 + 2.0 * k2.rho12 + 2.0 * k3.rho12 + k4.rho12)};

    const double tr = next.trace();
    const double drift = std::abs(tr - 1.0);
    if (drift > invariant_failure_tolerance || !std::isfinite(tr)) {
        std::ostringstream msg;
        msg << "trace drifted to " << tr << " at Delta = " << delta << "; reduce dt";
        throw NumericalError(msg.str(), drift);
    }
    if (drift > trace_renormalization_threshold) {
        const double s = 1.0 / tr;
        next.rho11 *= s;
        next.rho22 *= s;
        next.rho12 *= s;
        if (diagnostics != nullptr) {
            ++diagnostics->renormalizations;
            diagnostics->max_trace_correction = std::max(diagnostics->max_trace_correction, drift);
        }
    }

    const double tol = invariant_failure_tolerance;
    const double excess = std::norm(next.rho12) - next.rho11 * next.rho22;
    if (next.rho11 < -tol || next.rho11 > 1.0 + tol || excess > tol || !std::isfinite(excess)) {
        std::ostringstream msg;
        msg << "density matrix left the physical region (rho11 = " << next.rho11
            << ", |rho12|^2 - rho11 rho22 = " << excess << ") at Delta = " << delta
            << "; reduce dt";
        throw NumericalError(msg.str(), std::max(excess, std::abs(next.rho11 - 0.5) - 0.5));
    }
    return next;
}

std::size_t substep_count(double delta, double dt) noexcept {
    const double n = std::ceil(std::abs(delta) * dt / max_phase_per_substep);
    return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

QdState evolve_interval(const QdState& state, Complex field_at_t, Complex field_at_half,
                        Complex field_at_next, double delta, double dt, const StepContext& ctx,
                        StepDiagnostics* diagnostics) {
    const std::size_t n = substep_count(delta, dt);
    if (n == 1) {
        return step_rk4(state, field_at_t, field_at_half, field_at_next, delta, dt, ctx,
                        diagnostics);
    }
    // Quadratic through (0, f0), (1/2, fh), (1, f1) in the scaled time s = (t' - t) / dt.
    const Complex c1 = -3.0 * field_at_t + 4.0 * field_at_half - field_at_next;
    const Complex c2 = 2.0 * field_at_t - 4.0 * field_at_half + 2.0 * field_at_next;
    auto field = [&](double s) { return field_at_t + s * (c1 + s * c2); };

    const double h = dt / static_cast<double>(n);
    const double ds = 1.0 / static_cast<double>(n);
    QdState s = state;
    Complex f_start = field_at_t;
    for (std::size_t k = 0; k < n; ++k) {
        const double s0 = ds * static_cast<double>(k);
        const Complex f_end = (k + 1 == n) ? field_at_next : field(s0 + ds);
        s = step_rk4(s, f_start, field(s0 + 0.5 * ds), f_end, delta, h, ctx, diagnostics);
        f_start = f_end;
    }
    return s;
}

} // namespace sitqd
