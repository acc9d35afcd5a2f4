// bench_main.cpp — Microbenchmarks of the hot paths: kernels, rate table, RK4 step, ensemble source

#include <benchmark/benchmark.h>

#include <cmath>

#include "sitqd/bloch_dynamics.hpp"
#include "sitqd/phonon_bath.hpp"
#include "sitqd/polaron_rates.hpp"
#include "sitqd/propagation.hpp"

namespace {

using namespace sitqd;

const CorrelationTable& correlation() {
    static const CorrelationTable corr = CorrelationTable::build(PhononBathParams{});
    return corr;
}

void bm_correlation_table(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(CorrelationTable::build(PhononBathParams{}));
    }
}
BENCHMARK(bm_correlation_table)->Unit(benchmark::kMillisecond);

void bm_compute_kernels(benchmark::State& state) {
    const KernelIntegrands integrands(correlation());
    double delta = -5.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_kernels(0.4, delta, integrands));
        delta = delta > 5.0 ? -5.0 : delta + 0.37;
    }
}
BENCHMARK(bm_compute_kernels)->Unit(benchmark::kMicrosecond);

void bm_rate_table(benchmark::State& state) {
    RateTableSpec spec;
    spec.n_omega = static_cast<std::size_t>(state.range(0));
    spec.n_delta = 2 * spec.n_omega - 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(RateTable::build(spec, correlation()));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(spec.n_omega * spec.n_delta));
}
BENCHMARK(bm_rate_table)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

void bm_rk4_step(benchmark::State& state) {
    RateTableSpec spec;
    spec.n_omega = 21;
    spec.n_delta = 41;
    const auto table = RateTable::build(spec, correlation());
    const auto column = table.column(0.5);
    const StepContext ctx{state.range(0) != 0 ? &column : nullptr, RelaxationParams{}, table.mean_B()};
    QdState s;
    for (auto _ : state) {
        s = step_rk4(s, 0.3, 0.31, 0.32, 0.5, 0.06373, ctx);
        benchmark::DoNotOptimize(s);
        if (s.rho11 > 0.9) {
            s = QdState{};
        }
    }
}
BENCHMARK(bm_rk4_step)->Arg(0)->Arg(1)->ArgNames({"phonons"});

void bm_ensemble_source(benchmark::State& state) {
    const auto axis = make_time_axis(120.0, 6.373, 100);
    const auto row = sech_envelope(2.0 * units::pi, 6.373, 40.0, axis);
    const EnsembleDriver driver(build_ensemble(15.16, 0.0, static_cast<std::size_t>(state.range(0))), nullptr,
                                RelaxationParams{}, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(driver.source(row, axis));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(axis.size));
}
BENCHMARK(bm_ensemble_source)->Arg(15)->Arg(63)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
