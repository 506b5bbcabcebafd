#include <benchmark/benchmark.h>

#include <vector>

#include "mocet/engine.hpp"
#include "mocet/error_analysis.hpp"
#include "mocet/knn.hpp"
#include "mocet/synthetic.hpp"
#include "mocet/validation.hpp"

namespace {

void BM_NearestNeighbors(benchmark::State& state) {
    const auto items = static_cast<std::size_t>(state.range(0));
    const auto dim = static_cast<std::size_t>(state.range(1));
    const auto corpus = mocet::synthetic::random_corpus(items, dim, 0.5, 1);
    const auto index = mocet::build_index(corpus);
    const auto& query = corpus.items()[items / 2].embedding;
    for (auto _ : state) benchmark::DoNotOptimize(mocet::nearest_neighbors(index, query, 20));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(items));
}
BENCHMARK(BM_NearestNeighbors)->Args({1000, 64})->Args({10000, 64})->Args({10000, 768});

void BM_Simulate(benchmark::State& state) {
    const std::vector<double> p(static_cast<std::size_t>(state.range(0)), 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(mocet::simulate(p, 100000, 7));
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_Simulate)->Arg(1)->Arg(10)->Arg(50);

void BM_SimulateThreaded(benchmark::State& state) {
    const std::vector<double> p(10, 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(mocet::simulate(p, 1000000, 7, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_SimulateThreaded)->Arg(1)->Arg(4)->UseRealTime();

void BM_LeaveOneOut(benchmark::State& state) {
    const auto corpus = mocet::synthetic::two_cluster_corpus({.items = static_cast<std::size_t>(state.range(0))}, 3);
    const auto index = mocet::build_index(corpus);
    for (auto _ : state) benchmark::DoNotOptimize(mocet::leave_one_out_predictions(index, 20));
}
BENCHMARK(BM_LeaveOneOut)->Arg(200)->Arg(2000);

void BM_ApproximationReport(benchmark::State& state) {
    const mocet::CategoryProfile profile({{5, 0.9}, {5, 0.8}, {3, 0.7}, {12, 0.95}});
    for (auto _ : state) benchmark::DoNotOptimize(mocet::approximation_report(profile));
}
BENCHMARK(BM_ApproximationReport);

}  // namespace

BENCHMARK_MAIN();
