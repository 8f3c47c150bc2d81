#include "conical/asymptotics.hpp"
#include "conical/diffops.hpp"
#include "conical/potentials.hpp"
#include "conical/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace conical;

namespace {

Field liouville_field(std::size_t n) {
    const PolarGrid g = make_grid(1e-3, n + 1, n);
    return sample_metric(MetricDescriptor(SphericalLiouville{0.5}), g);
}

void BM_Laplacian(benchmark::State& state) {
    const Field u = liouville_field(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(laplacian(u));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(u.size()));
}
BENCHMARK(BM_Laplacian)->Arg(64)->Arg(128)->Arg(256);

void BM_NewtonPotential(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const PolarGrid g = make_grid(1e-3, n + 1, n);
    const Density f(g, std::vector<double>(g.n_nodes(), 1.0), false);
    for (auto _ : state)
        benchmark::DoNotOptimize(newton_potential(f, g));
}
BENCHMARK(BM_NewtonPotential)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_NewtonSolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const PolarGrid g = make_grid(0.1, n + 1, n);
    const MetricDescriptor m(SphericalLiouville{1.0});
    const BoundaryData bc = BoundaryData::from_metric(m, g);
    const CurvatureSpec k = CurvatureSpec::constant(-4.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve(k, bc, g, SolverConfig{}));
}
BENCHMARK(BM_NewtonSolve)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_FitGamma(benchmark::State& state) {
    const Field u = liouville_field(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_gamma(u));
}
BENCHMARK(BM_FitGamma)->Arg(128)->Arg(256);

void BM_LaurentSpectrum(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    std::vector<cplx> samples(m);
    for (std::size_t j = 0; j < m; ++j)
        samples[j] = std::exp(std::polar(0.5, 2.0 * std::numbers::pi *
                                                  static_cast<double>(j) /
                                                  static_cast<double>(m)));
    for (auto _ : state)
        benchmark::DoNotOptimize(laurent_spectrum(samples, 0.5, m / 2 - 1));
}
BENCHMARK(BM_LaurentSpectrum)->Arg(256)->Arg(1024);

} // namespace

BENCHMARK_MAIN();
