// propagation.hpp — Retarded-frame march of the Rabi envelope through the QD medium
//
// In (zeta = z, tau = t - z/c) the reduced Maxwell equation becomes
//
//   d Omega / d zeta = -i eta sum_k w_k rho12_k(tau),   eta = 3 N lambda^2 gamma / 4 pi > 0,
//
// so a ground-state medium attenuates a weak resonant pulse. Every slice starts its dots in the
// ground state at tau = 0; slices are advanced with Heun's predictor-corrector.

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sitqd/analysis.hpp"
#include "sitqd/bloch_dynamics.hpp"
#include "sitqd/config.hpp"
#include "sitqd/ensemble_medium.hpp"
#include "sitqd/polaron_rates.hpp"

namespace sitqd {

struct TimeAxis {
    double step{0.0};      // ps
    std::size_t size{0};

    double at(std::size_t i) const noexcept { return step * static_cast<double>(i); }
    double end() const noexcept { return size == 0 ? 0.0 : at(size - 1); }
    // Index of the sample nearest to tau, clamped to the axis.
    std::size_t index_of(double tau) const noexcept;
};

// Uniform axis on [0, window] with step tau0 / points_per_tau0.
TimeAxis make_time_axis(double window, double tau0, std::size_t points_per_tau0);

// Omega0 sech((tau - tau_c) / tau0), real, with Omega0 chosen so the area inside the axis range
// is exactly theta0 (Omega0 -> theta0 / (pi tau0) for an unbounded window).
std::vector<Complex> sech_envelope(double theta0, double tau0, double tau_c, const TimeAxis& axis);

// Peak amplitude used by sech_envelope.
double sech_amplitude(double theta0, double tau0, double tau_c, const TimeAxis& axis);

// 3 N lambda^2 gamma / 4 pi in 1/(mm ps) for N in m^-3, lambda in nm, gamma in 1/ps.
double coupling_constant(double density_per_m3, double wavelength_nm, double gamma);

// Quantities derived from a configuration.
struct MediumParams {
    double density{0.0};        // m^-3
    double length{0.0};         // mm
    double wavelength{0.0};     // nm
    double eta{0.0};            // 1/(mm ps)
    double g_center{0.0};       // g(0), ps
    double alpha{0.0};          // 2 pi eta g(0), 1/mm
};

MediumParams medium_params(const SimConfig& config);

// Builds the configured detuning discretization.
DetuningEnsemble make_ensemble(const SimConfig& config);

struct FieldGrid {
    std::vector<double> zeta;       // mm, stored slices only
    TimeAxis tau{};
    std::vector<Complex> envelope;  // row-major, one row per stored zeta

    std::size_t rows() const noexcept { return zeta.size(); }
    std::span<const Complex> row(std::size_t i) const noexcept {
        return {envelope.data() + i * tau.size, tau.size};
    }
};

// The ensemble with everything needed to evolve it through a field row.
class EnsembleDriver {
public:
    // `table` may be null (phonon scattering off); it must outlive the driver otherwise.
    EnsembleDriver(DetuningEnsemble ensemble, const RateTable* table, RelaxationParams relax,
                   double mean_B);

    const DetuningEnsemble& ensemble() const noexcept { return ensemble_; }
    double mean_B() const noexcept { return mean_B_; }

    // Evolves every node from the ground state across the row and returns sum_k w_k rho12_k at
    // every tau sample. Bit-identical for any thread count.
    std::vector<Complex> source(std::span<const Complex> row, const TimeAxis& axis,
                                unsigned threads = 1, StepDiagnostics* diagnostics = nullptr) const;

    // States of node k at every tau sample, row-major (node, tau).
    std::vector<QdState> trajectories(std::span<const Complex> row, const TimeAxis& axis,
                                      unsigned threads = 1) const;

private:
    template <class Sink>
    void evolve_node(std::size_t k, std::span<const Complex> row,
                     std::span<const Complex> midpoints, const TimeAxis& axis, Sink&& sink,
                     StepDiagnostics* diagnostics) const;

    DetuningEnsemble ensemble_;
    std::vector<RateColumn> columns_;
    RelaxationParams relax_;
    double mean_B_;
};

// Field values halfway between samples from the four-point cubic (three-point at the edges).
std::vector<Complex> midpoint_fields(std::span<const Complex> row);

struct SliceUpdate {
    std::vector<Complex> field;   // envelope at zeta + d_zeta
    std::vector<Complex> source;  // ensemble response to that envelope
};

// Heun step: predict with the current source, re-evolve the ensemble at the prediction, correct
// with the averaged source, then evaluate the response to the corrected field for the next step.
// Throws NumericalError with the (zeta, tau) location of the first non-finite value.
SliceUpdate advance_slice(std::span<const Complex> current, std::span<const Complex> current_source,
                          double zeta, double d_zeta, double eta, const EnsembleDriver& driver,
                          const TimeAxis& axis, unsigned threads = 1,
                          StepDiagnostics* diagnostics = nullptr);

struct SliceObservables {
    double zeta{0.0};        // mm
    double area{0.0};        // rad, configured convention
    double peak_value{0.0};  // rad/ps
    double peak_time{0.0};   // ps
    double energy{0.0};      // int |Omega|^2 dtau, rad^2/ps
};

struct RunOptions {
    unsigned threads{1};
    // Reuse a table built for the same bath and a sufficient domain; otherwise one is built.
    std::shared_ptr<const RateTable> rate_table{};
    // Directory for the binary rate-table cache; empty disables caching.
    std::string table_cache_dir{};
};

struct SimulationResult {
    FieldGrid field;
    std::vector<SliceObservables> slices;  // every zeta step, including zeta = 0
    MediumParams medium;
    double mean_B{1.0};
    double beer_alpha{0.0};     // 1/mm, beer_extinction(eta, g(0), <B>)
    double validity_metric{0.0};
    double max_field{0.0};      // rad/ps, over every computed slice
    std::size_t ensemble_size{0};
    std::size_t slice_count{0};
    double d_zeta{0.0};
    StepDiagnostics diagnostics{};
    std::vector<std::string> warnings;
    std::shared_ptr<const RateTable> rate_table{};
};

inline constexpr double energy_growth_limit = 10.0;

// Rate-table domain sufficient for a configuration and ensemble.
RateTableSpec rate_table_spec_for(const SimConfig& config, const DetuningEnsemble& ensemble,
                                  double mean_B);

// Builds (or loads from the cache directory) the table for a configuration.
std::shared_ptr<const RateTable> prepare_rate_table(const SimConfig& config,
                                                    const DetuningEnsemble& ensemble,
                                                    const RunOptions& options);

SimulationResult run_simulation(const SimConfig& config, const RunOptions& options = {});

} // namespace sitqd
