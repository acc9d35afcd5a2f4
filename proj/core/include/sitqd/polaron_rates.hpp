// polaron_rates.hpp — Phonon-induced scattering quantities of the simplified polaron ME
//
// Each of the seven rates is a tau-integral over the polaron Green's functions.
// The factors Re/Im[<B> Omega] do not depend on tau, so they are hoisted out and
// only seven (Omega_R, Delta)-dependent kernels are integrated:
//
//   cosh_f     = int Re{(cosh phi - 1) f}
//   sinh_cos   = int Re{sinh phi} cos(eta tau)
//   exp_sin    = int Im{e^phi - 1} (Delta/eta) sin(eta tau)
//   expm_sin   = int Re{e^-phi - 1} (Delta/eta) sin(eta tau)
//   exp_sin_re = int Re{e^phi - 1} (Delta/eta) sin(eta tau)
//   cosh_h     = int Re{cosh phi - 1} h
//   sinh_sin   = int Re{sinh phi} sin(eta tau) / eta
//
// with eta = sqrt(Omega_R^2 + Delta^2), f = (Delta^2 cos(eta tau) + Omega_R^2)/eta^2,
// h = Delta (1 - cos(eta tau))/eta^2 and Omega_R = <B>|Omega|.
// At eta = 0 the analytic limits sin(eta tau)/eta -> tau, f -> 1, h -> 0 are used.
//
// A RateTable tabulates the kernels on an (Omega_R, Delta) lattice and interpolates
// bilinearly; the Delta axis is sinh-mapped so nodes cluster near resonance.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sitqd/phonon_bath.hpp"

namespace sitqd {

enum class Kernel : std::size_t {
    cosh_f,
    sinh_cos,
    exp_sin,
    expm_sin,
    exp_sin_re,
    cosh_h,
    sinh_sin,
};
inline constexpr std::size_t kernel_count = 7;

using KernelValues = std::array<double, kernel_count>;

struct RateKernels {
    double omega_r{0.0};  // provenance: where the kernels were evaluated
    double delta{0.0};
    KernelValues values{};

    double operator[](Kernel k) const noexcept { return values[static_cast<std::size_t>(k)]; }
};

struct PhononRates {
    double gamma_plus{0.0};
    double gamma_minus{0.0};
    double gamma_cd{0.0};
    double gamma_sd{0.0};
    double delta_pm{0.0};
    double gamma_gu_plus{0.0};
    double gamma_gu_minus{0.0};
};

double generalized_rabi(double omega_r, double delta);

// Real and imaginary parts of the Green's-function combinations on the phi grid.
// Building these once removes every transcendental call on phi from the kernel loop.
class KernelIntegrands {
public:
    explicit KernelIntegrands(const CorrelationTable& corr);

    double tau_step() const noexcept { return tau_step_; }
    std::size_t size() const noexcept { return re_cosh_.size(); }

    std::span<const double> re_cosh() const noexcept { return re_cosh_; }    // Re(cosh phi - 1)
    std::span<const double> re_sinh() const noexcept { return re_sinh_; }    // Re(sinh phi)
    std::span<const double> im_exp() const noexcept { return im_exp_; }      // Im(e^phi - 1)
    std::span<const double> re_exp() const noexcept { return re_exp_; }      // Re(e^phi - 1)
    std::span<const double> re_expm() const noexcept { return re_expm_; }    // Re(e^-phi - 1)

private:
    double tau_step_;
    std::vector<double> re_cosh_, re_sinh_, im_exp_, re_exp_, re_expm_;
};

RateKernels compute_kernels(double omega_r, double delta, const CorrelationTable& corr);
RateKernels compute_kernels(double omega_r, double delta, const KernelIntegrands& integrands);

// Combines kernels with the field-phase prefactors. Throws std::invalid_argument if the
// kernels were not evaluated at (mean_B |omega|, delta).
PhononRates assemble_rates(Complex omega, double delta, const RateKernels& kernels, double mean_B);

namespace detail {
// Unchecked combination used on the hot path; omega_eff = <B> Omega.
PhononRates combine(Complex omega_eff, const KernelValues& k) noexcept;
} // namespace detail

struct RateTableSpec {
    std::size_t n_omega{201};
    std::size_t n_delta{401};
    double omega_max{1.0};    // rad/ps, upper edge of the Omega_R axis
    double delta_span{91.0};  // rad/ps, Delta axis covers [-span, span]
    double delta_scale{2.0};  // rad/ps, Delta = scale * sinh(u) with u uniform

    bool operator==(const RateTableSpec&) const = default;
};

class RateColumn;

class RateTable {
public:
    // Fills every node with compute_kernels. Rows are independent; `threads` workers share them.
    static RateTable build(const RateTableSpec& spec, const CorrelationTable& corr,
                           unsigned threads = 1);

    const RateTableSpec& spec() const noexcept { return spec_; }
    const PhononBathParams& bath() const noexcept { return bath_; }
    double mean_B() const noexcept { return mean_B_; }
    std::span<const double> omega_axis() const noexcept { return omega_axis_; }
    std::span<const double> delta_axis() const noexcept { return delta_axis_; }

    RateKernels node(std::size_t i_omega, std::size_t j_delta) const;

    // Bilinear interpolation. Throws RangeError naming "omega_r" or "delta" outside the domain.
    RateKernels interpolate(double omega_r, double delta) const;

    // Kernels interpolated to a fixed detuning, for repeated lookups along the Omega axis.
    RateColumn column(double delta) const;

    // Row-major grid of one kernel, n_omega x n_delta.
    std::span<const double> grid(Kernel k) const noexcept {
        return grids_[static_cast<std::size_t>(k)];
    }

    // Binary cache: "SITQDRT1" magic, header, axes, then seven row-major float64 grids,
    // all little-endian.
    void save(std::ostream& out) const;
    static RateTable load(std::istream& in);
    void save(const std::filesystem::path& path) const;
    static RateTable load(const std::filesystem::path& path);

private:
    struct Cell {
        std::size_t index;
        double frac;
    };
    Cell omega_cell(double omega_r) const;
    Cell delta_cell(double delta) const;
    double delta_u_max() const noexcept;

    RateTableSpec spec_{};
    PhononBathParams bath_{};
    double mean_B_{1.0};
    std::vector<double> omega_axis_;
    std::vector<double> delta_axis_;
    std::array<std::vector<double>, kernel_count> grids_;
};

// Hex digest identifying a table by its bath parameters and grid spec.
std::string rate_table_cache_key(const PhononBathParams& bath, const RateTableSpec& spec);

class RateColumn {
public:
    RateColumn() = default;

    double delta() const noexcept { return delta_; }
    double omega_max() const noexcept { return omega_max_; }

    // Linear interpolation along Omega_R; identical to RateTable::interpolate at this delta.
    KernelValues kernels(double omega_r) const;

    PhononRates rates(Complex omega, double mean_B) const {
        return detail::combine(mean_B * omega, kernels(mean_B * std::sqrt(std::norm(omega))));
    }

private:
    friend class RateTable;
    double delta_{0.0};
    double omega_step_{0.0};
    double omega_max_{0.0};
    std::vector<KernelValues> values_;
};

PhononRates lookup_rates(const RateTable& table, Complex omega, double delta, double mean_B);

} // namespace sitqd
