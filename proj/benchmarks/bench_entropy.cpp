#include <benchmark/benchmark.h>

#include "relent/entropy.hpp"
#include "relent/lab.hpp"
#include "relent/random.hpp"

using namespace relent;

namespace {

std::pair<StateOperator, StateOperator> seeded_pair(int dim) {
    return {random_state(dim, 0.1, 0.9, derive_stream(314, 1)),
            random_state(dim, 0.1, 0.9, derive_stream(314, 2))};
}

void BM_SpectralDecompose(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    auto [a, b] = seeded_pair(dim);
    Matrix m = a.mat();
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_decompose(HermitianMatrix{m}));
    }
}

void BM_DirectEntropy(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    auto [a, b] = seeded_pair(dim);
    auto ferm = builtin("fermionic");
    for (auto _ : state) {
        benchmark::DoNotOptimize(relative_entropy_direct(ferm, a, b));
    }
}

void BM_DerivativeEntropy(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    auto [a, b] = seeded_pair(dim);
    auto ferm = builtin("fermionic");
    for (auto _ : state) {
        benchmark::DoNotOptimize(relative_entropy_gateaux(ferm, a, b));
    }
}

void BM_IntegralEntropy(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    auto [a, b] = seeded_pair(dim);
    auto ferm = builtin("fermionic");
    for (auto _ : state) {
        benchmark::DoNotOptimize(relative_entropy_integral(ferm, a, b));
    }
}

void BM_ResolventDerivative(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    auto [a, b] = seeded_pair(dim);
    HermitianMatrix q{a.mat() - b.mat()};
    auto ferm = builtin("fermionic");
    for (auto _ : state) {
        benchmark::DoNotOptimize(gateaux_derivative_resolvent(ferm, b, q));
    }
}

void BM_MeasureQuadrature(benchmark::State& state) {
    auto ferm = builtin("fermionic");
    auto f = [](double lambda) { return 1.0 / (2.0 - lambda); };
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_measure(ferm.mu, f));
    }
}

void BM_MonotonicityTrial(benchmark::State& state) {
    auto ferm = builtin("fermionic");
    std::uint64_t k = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(monotonicity_trials(ferm, 4, 3, 1, derive_stream(99, k++)));
    }
}

BENCHMARK(BM_SpectralDecompose)->Arg(16)->Arg(64)->Arg(200);
BENCHMARK(BM_DirectEntropy)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(BM_DerivativeEntropy)->Arg(4)->Arg(16)->Arg(64);
BENCHMARK(BM_IntegralEntropy)->Arg(4)->Arg(16);
BENCHMARK(BM_ResolventDerivative)->Arg(4)->Arg(8);
BENCHMARK(BM_MeasureQuadrature);
BENCHMARK(BM_MonotonicityTrial);

}  // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) {
        return 1;
    }
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
