// Parallel kernels against their serial references.
#include "flowstack/learn/kernel.hpp"
#include "flowstack/learn/knn.hpp"
#include "flowstack/rng.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using flowstack::Matrix;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    flowstack::Rng rng(seed);
    Matrix m(rows, cols);
    for (auto& v : m.data()) v = rng.uniform();
    return m;
}

flowstack::learn::KnnModel make_model(std::size_t rows, std::size_t dims) {
    auto x = random_matrix(rows, dims, 1);
    std::vector<int> y(rows);
    for (std::size_t i = 0; i < rows; ++i) y[i] = x(i, 0) > 0.5 ? 1 : 0;
    return flowstack::learn::knn_fit(std::move(x), y, 5);
}

void BM_KnnBatchSerialBruteForce(benchmark::State& state) {
    const auto model = make_model(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    const auto queries = random_matrix(1000, model.train_features.cols(), 2);
    for (auto _ : state) benchmark::DoNotOptimize(flowstack::learn::knn_predict_batch_serial(model, queries));
    state.SetItemsProcessed(state.iterations() * 1000);
}

void BM_KnnBatchParallelKdTree(benchmark::State& state) {
    const auto model = make_model(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    const auto queries = random_matrix(1000, model.train_features.cols(), 2);
    for (auto _ : state) benchmark::DoNotOptimize(flowstack::learn::knn_predict_batch(model, queries));
    state.SetItemsProcessed(state.iterations() * 1000);
}

void BM_KernelColumnSerial(benchmark::State& state) {
    const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), 40, 3);
    std::vector<double> column(x.rows());
    const flowstack::learn::KernelSpec spec{flowstack::learn::KernelSpec::Kind::rbf, 0.5};
    for (auto _ : state) {
        flowstack::learn::kernel_column_serial(spec, x, 7, column);
        benchmark::ClobberMemory();
    }
}

void BM_KernelColumnParallel(benchmark::State& state) {
    const auto x = random_matrix(static_cast<std::size_t>(state.range(0)), 40, 3);
    std::vector<double> column(x.rows());
    const flowstack::learn::KernelSpec spec{flowstack::learn::KernelSpec::Kind::rbf, 0.5};
    for (auto _ : state) {
        flowstack::learn::kernel_column(spec, x, 7, column);
        benchmark::ClobberMemory();
    }
}

}  // namespace

BENCHMARK(BM_KnnBatchSerialBruteForce)->Args({5000, 5})->Args({5000, 40})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KnnBatchParallelKdTree)->Args({5000, 5})->Args({5000, 40})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KernelColumnSerial)->Arg(20000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_KernelColumnParallel)->Arg(20000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
