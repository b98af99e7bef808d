#include "goliath/bandwidth.hpp"
#include "goliath/forest.hpp"
#include "goliath/generators.hpp"
#include "goliath/neighbors.hpp"
#include "goliath/weights.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace goliath;

namespace {

// Uniform covariates and a right-skewed positive target in the last column.
Dataset skewed(std::size_t n, std::size_t p) {
    Rng rng(7);
    Matrix m(n, p + 1);
    std::vector<ColumnSchema> schema;
    for (std::size_t j = 0; j < p; ++j) schema.push_back({"x" + std::to_string(j), VariableKind::unit_interval(), false});
    schema.push_back({"y", VariableKind::positive_half_line(0.0), true});
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            m(i, j) = rng.uniform();
            s += m(i, j);
        }
        m(i, p) = std::exp(s) * rng.gamma(2.0);
    }
    return Dataset(schema, m);
}

void BM_Knn(benchmark::State& state) {
    const Dataset ds = skewed(static_cast<std::size_t>(state.range(0)), 8);
    const Matrix x = ds.covariates();
    for (auto _ : state) benchmark::DoNotOptimize(knn(x, 5));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Knn)->RangeMultiplier(2)->Range(500, 4000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_GammaLscvBandwidth(benchmark::State& state) {
    const Dataset ds = skewed(static_cast<std::size_t>(state.range(0)), 1);
    const auto y = ds.target();
    for (auto _ : state) benchmark::DoNotOptimize(estimate_bandwidth(KernelKind::gamma(0.0), y));
}
BENCHMARK(BM_GammaLscvBandwidth)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_InverseKdeWeights(benchmark::State& state) {
    const Dataset ds = skewed(static_cast<std::size_t>(state.range(0)), 1);
    const auto y = ds.target();
    for (auto _ : state) benchmark::DoNotOptimize(inverse_kde_weights(y, WeightMode::Inverse));
}
BENCHMARK(BM_InverseKdeWeights)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State& state) {
    const Dataset ds = skewed(2000, 8);
    GeneratorConfig cfg;
    cfg.family = static_cast<Family>(state.range(0));
    cfg.n_synthetic = 2000;
    cfg.mode = OutputMode::Synth;
    const auto w = inverse_kde_weights(ds.target(), WeightMode::Inverse);
    state.SetLabel(to_string(cfg.family));
    for (auto _ : state) {
        Rng rng(1);
        benchmark::DoNotOptimize(generate(ds, cfg, w, rng));
    }
}
BENCHMARK(BM_Generate)
    ->DenseRange(static_cast<int>(Family::OS), static_cast<int>(Family::ENNSB))
    ->Unit(benchmark::kMillisecond);

void BM_TrainForest(benchmark::State& state) {
    const Dataset ds = skewed(static_cast<std::size_t>(state.range(0)), 8);
    const Matrix x = ds.covariates();
    const auto y = ds.target();
    ForestParams params;
    params.n_trees = 50;
    for (auto _ : state) benchmark::DoNotOptimize(train_forest(x, y, params));
}
BENCHMARK(BM_TrainForest)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
