// ensemble_medium.cpp — Detuning quadratures and the macroscopic coherence sum

#include "sitqd/ensemble_medium.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sitqd/error.hpp"

namespace sitqd {

namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;

// Standard normal mass on [z0, z1], evaluated on the side that avoids cancellation.
double normal_mass(double z0, double z1) {
    if (z0 >= 0.0) {
        return 0.5 * (std::erfc(z0 * inv_sqrt2) - std::erfc(z1 * inv_sqrt2));
    }
    if (z1 <= 0.0) {
        return 0.5 * (std::erfc(-z1 * inv_sqrt2) - std::erfc(-z0 * inv_sqrt2));
    }
    return 0.5 * (std::erf(z1 * inv_sqrt2) - std::erf(z0 * inv_sqrt2));
}

double normal_density(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

void normalize(DetuningEnsemble& e) {
    double total = 0.0;
    for (double w : e.weights) {
        total += w;
    }
    for (double& w : e.weights) {
        w /= total;
    }
}

void require_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("ensemble.sigma", "sigma must be > 0");
    }
}

} // namespace

double gaussian_profile(double delta, double sigma, double delta_c) {
    if (!(sigma > 0.0)) {
        throw std::domain_error("gaussian_profile: sigma must be > 0");
    }
    const double z = (delta - delta_c) / sigma;
    return normal_density(z) / sigma;
}

std::string_view to_string(EnsembleScheme scheme) noexcept {
    switch (scheme) {
    case EnsembleScheme::resolved:
        return "resolved";
    case EnsembleScheme::gauss_hermite:
        return "gauss_hermite";
    case EnsembleScheme::trapezoid:
        return "trapezoid";
    case EnsembleScheme::single:
        return "single";
    }
    return "resolved";
}

EnsembleScheme ensemble_scheme_from_string(std::string_view name) {
    for (auto s : {EnsembleScheme::resolved, EnsembleScheme::gauss_hermite,
                   EnsembleScheme::trapezoid, EnsembleScheme::single}) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw std::invalid_argument("unknown ensemble scheme '" + std::string(name) +
                                "' (expected resolved, gauss_hermite, trapezoid or single)");
}

double DetuningEnsemble::max_abs_detuning() const noexcept {
    double m = 0.0;
    for (double d : nodes) {
        m = std::max(m, std::abs(d));
    }
    return m;
}

DetuningEnsemble build_ensemble(double sigma, double delta_c, std::size_t n_nodes) {
    if (n_nodes < 3) {
        throw ConfigError("ensemble.n_nodes", "Gauss-Hermite needs at least 3 nodes");
    }
    require_sigma(sigma);

    // Jacobi matrix of the probabilists' Hermite polynomials: zero diagonal, sqrt(k) off it.
    const auto n = static_cast<Eigen::Index>(n_nodes);
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 1; k < n; ++k) {
        const double off = std::sqrt(static_cast<double>(k));
        jacobi(k, k - 1) = off;
        jacobi(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Gauss-Hermite eigenproblem failed");
    }

    DetuningEnsemble e;
    e.sigma = sigma;
    e.delta_c = delta_c;
    e.nodes.resize(n_nodes);
    e.weights.resize(n_nodes);
    const auto& x = solver.eigenvalues();
    const auto& v = solver.eigenvectors();
    for (std::size_t k = 0; k < n_nodes; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        e.nodes[k] = x(kk);
        e.weights[k] = v(0, kk) * v(0, kk);
    }
    // Enforce exact mirror symmetry before mapping.
    for (std::size_t k = 0; k < n_nodes / 2; ++k) {
        const std::size_t m = n_nodes - 1 - k;
        const double node = 0.5 * (e.nodes[m] - e.nodes[k]);
        const double weight = 0.5 * (e.weights[m] + e.weights[k]);
        e.nodes[k] = -node;
        e.nodes[m] = node;
        e.weights[k] = weight;
        e.weights[m] = weight;
    }
    if (n_nodes % 2 == 1) {
        e.nodes[n_nodes / 2] = 0.0;
    }
    for (double& d : e.nodes) {
        d = delta_c + sigma * d;
    }
    normalize(e);
    return e;
}

DetuningEnsemble build_resolved_ensemble(double sigma, double delta_c, const ResolvedGrid& grid) {
    require_sigma(sigma);
    if (!(grid.core_spacing > 0.0) || !(grid.core_halfwidth >= 0.0) || !(grid.tail_growth >= 1.0) ||
        !(grid.extent_sigmas > 0.0)) {
        throw ConfigError("ensemble", "invalid resolved-grid layout");
    }

    // Positive-side cell edges in units of sigma, starting at the centre cell's upper edge.
    const double h = grid.core_spacing / sigma;
    const double extent = grid.extent_sigmas;
    const auto k_core = static_cast<std::size_t>(std::llround(grid.core_halfwidth / grid.core_spacing));
    std::vector<double> edges;
    double edge = 0.5 * h;
    edges.push_back(std::min(edge, extent));
    for (std::size_t k = 0; k < k_core && edge < extent; ++k) {
        edge += h;
        edges.push_back(std::min(edge, extent));
    }
    double width = h;
    while (edge < extent) {
        width *= grid.tail_growth;
        edge += width;
        // Absorb a sliver that would be narrower than a third of its predecessor.
        if (extent - edge < width / 3.0) {
            edge = extent;
        }
        edges.push_back(std::min(edge, extent));
    }

    // Half-line cells [edges[i], edges[i+1]] and the centre cell [-edges[0], edges[0]].
    std::vector<double> z_pos, w_pos;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double z0 = edges[i];
        const double z1 = edges[i + 1];
        const double mass = normal_mass(z0, z1);
        z_pos.push_back((normal_density(z0) - normal_density(z1)) / mass);
        w_pos.push_back(mass);
    }

    DetuningEnsemble e;
    e.sigma = sigma;
    e.delta_c = delta_c;
    const std::size_t half = z_pos.size();
    e.nodes.resize(2 * half + 1);
    e.weights.resize(2 * half + 1);
    e.nodes[half] = delta_c;
    e.weights[half] = normal_mass(-edges[0], edges[0]);
    for (std::size_t i = 0; i < half; ++i) {
        e.nodes[half + 1 + i] = delta_c + sigma * z_pos[i];
        e.nodes[half - 1 - i] = delta_c - sigma * z_pos[i];
        e.weights[half + 1 + i] = w_pos[i];
        e.weights[half - 1 - i] = w_pos[i];
    }
    normalize(e);
    return e;
}

DetuningEnsemble build_trapezoid_ensemble(double sigma, double delta_c, std::size_t n_nodes) {
    if (n_nodes < 3) {
        throw ConfigError("ensemble.n_nodes", "trapezoid ensemble needs at least 3 nodes");
    }
    require_sigma(sigma);
    DetuningEnsemble e;
    e.sigma = sigma;
    e.delta_c = delta_c;
    e.nodes.resize(n_nodes);
    e.weights.resize(n_nodes);
    const double step = 12.0 / static_cast<double>(n_nodes - 1);
    for (std::size_t k = 0; k < n_nodes; ++k) {
        const double z = -6.0 + step * static_cast<double>(k);
        const double end = (k == 0 || k + 1 == n_nodes) ? 0.5 : 1.0;
        e.nodes[k] = z;
        e.weights[k] = end * normal_density(z);
    }
    for (std::size_t k = 0; k < n_nodes / 2; ++k) {
        e.nodes[k] = -e.nodes[n_nodes - 1 - k];
    }
    if (n_nodes % 2 == 1) {
        e.nodes[n_nodes / 2] = 0.0;
    }
    for (double& d : e.nodes) {
        d = delta_c + sigma * d;
    }
    normalize(e);
    return e;
}

DetuningEnsemble single_detuning(double delta) {
    DetuningEnsemble e;
    e.nodes = {delta};
    e.weights = {1.0};
    e.sigma = 0.0;
    e.delta_c = delta;
    return e;
}

Complex weighted_sum(std::span<const Complex> values, std::span<const double> weights) {
    if (values.size() != weights.size()) {
        throw std::invalid_argument("weighted_sum: length mismatch");
    }
    Complex total{0.0, 0.0};
    for (std::size_t start = 0; start < values.size(); start += detail::reduction_block) {
        const std::size_t stop = std::min(values.size(), start + detail::reduction_block);
        Complex partial{0.0, 0.0};
        for (std::size_t k = start; k < stop; ++k) {
            partial += weights[k] * values[k];
        }
        total += partial;
    }
    return total;
}

Complex macroscopic_coherence(std::span<const QdState> states, const DetuningEnsemble& ensemble) {
    if (states.size() != ensemble.size()) {
        throw std::invalid_argument("macroscopic_coherence: one state per ensemble node required");
    }
    std::vector<Complex> rho12(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        rho12[k] = states[k].rho12;
    }
    return weighted_sum(rho12, ensemble.weights);
}

} // namespace sitqd
