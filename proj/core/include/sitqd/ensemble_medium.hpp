// ensemble_medium.hpp — Gaussian inhomogeneous broadening and its discretization
//
// Three discretizations of g(Delta) are provided:
//   resolved       fine uniform cells around Delta_c plus geometrically growing tail cells,
//                  each carrying its exact Gaussian mass and placed at its Gaussian centroid
//   gauss_hermite  Golub-Welsch nodes for the weight exp(-x^2/2), mapped to Delta_c + sigma x
//   trapezoid      uniform nodes on [Delta_c - 6 sigma, Delta_c + 6 sigma], weights g(Delta_k)
// All weights are normalized to sum to 1 and every scheme is mirror-symmetric about Delta_c.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "sitqd/bloch_dynamics.hpp"

namespace sitqd {

// (1 / sigma sqrt(2 pi)) exp(-(Delta - Delta_c)^2 / 2 sigma^2). Throws std::domain_error if sigma <= 0.
double gaussian_profile(double delta, double sigma, double delta_c);

enum class EnsembleScheme { resolved, gauss_hermite, trapezoid, single };

std::string_view to_string(EnsembleScheme scheme) noexcept;
// Throws std::invalid_argument for an unknown name.
EnsembleScheme ensemble_scheme_from_string(std::string_view name);

struct DetuningEnsemble {
    std::vector<double> nodes;    // rad/ps, ascending
    std::vector<double> weights;  // sum to 1
    double sigma{0.0};
    double delta_c{0.0};

    std::size_t size() const noexcept { return nodes.size(); }
    double max_abs_detuning() const noexcept;
};

// Cell layout for the resolved scheme.
struct ResolvedGrid {
    double core_halfwidth{4.0};  // rad/ps, uniform region |Delta - Delta_c| <= halfwidth
    double core_spacing{0.04};   // rad/ps
    double tail_growth{1.25};    // width ratio of successive tail cells
    double extent_sigmas{6.0};   // tails stop at Delta_c +- extent * sigma

    bool operator==(const ResolvedGrid&) const = default;
};

// Gauss-Hermite ensemble. Throws ConfigError("ensemble.n_nodes") when n_nodes < 3.
DetuningEnsemble build_ensemble(double sigma, double delta_c, std::size_t n_nodes);

DetuningEnsemble build_resolved_ensemble(double sigma, double delta_c, const ResolvedGrid& grid = {});

DetuningEnsemble build_trapezoid_ensemble(double sigma, double delta_c, std::size_t n_nodes);

// A single dot at detuning `delta` with unit weight.
DetuningEnsemble single_detuning(double delta);

// Sum_k w_k rho12_k. Throws std::invalid_argument on a length mismatch.
Complex macroscopic_coherence(std::span<const QdState> states, const DetuningEnsemble& ensemble);

// Weighted sum over fixed blocks of `detail::reduction_block` terms, partial sums combined in
// block order, so the result does not depend on how the terms were produced.
Complex weighted_sum(std::span<const Complex> values, std::span<const double> weights);

namespace detail {
inline constexpr std::size_t reduction_block = 16;
} // namespace detail

} // namespace sitqd
