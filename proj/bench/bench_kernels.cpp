// Copyright (C) 2026 The AdaTP Engine Authors
// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP kernels. Run with OMP_NUM_THREADS set to compare
// thread counts; the default uses every available core.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "adatp/kernels.hpp"
#include "adatp/synth_bench.hpp"

using namespace adatp;

namespace {

std::vector<float> random_values(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> v(count);
    for (auto& x : v) {
        x = u(rng);
    }
    return v;
}

// Text rows x (text + visual) columns of a full attention map.
template <bool Parallel>
void BM_ColumnMeans(benchmark::State& state) {
    const std::size_t text = 64;
    const std::size_t visual = static_cast<std::size_t>(state.range(0));
    const std::size_t cols = text + visual;
    const auto data = random_values(text * cols, 1);
    const MatrixView m{data, text, cols};
    std::vector<float> out(visual);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::column_means_parallel(m, {0, text}, {text, cols}, out);
        } else {
            kernels::column_means_serial(m, {0, text}, {text, cols}, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(text * visual));
}

template <bool Parallel>
void BM_PositionSums(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t c = 196;
    const auto scores = random_values(n * c, 2);
    std::vector<double> out(c);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::position_sums_parallel(scores, n, c, out);
        } else {
            kernels::position_sums_serial(scores, n, c, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(n * c));
}

template <bool Parallel>
void BM_RowCosines(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const std::size_t d = 3584;
    const auto rows = random_values(n * d, 3);
    const auto ref = random_values(d, 4);
    std::vector<double> out(n);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::row_cosines_parallel(rows, d, ref, out);
        } else {
            kernels::row_cosines_serial(rows, d, ref, out);
        }
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(n * d));
}

template <bool Parallel>
void BM_Compare(benchmark::State& state) {
    std::vector<SynthSample> corpus;
    for (std::int64_t s = 0; s < state.range(0); ++s) {
        corpus.push_back(generate(biased_spec(std::uint64_t(s))));
    }
    CompareOptions opts;
    opts.parallel = Parallel;
    for (auto _ : state) {
        auto result = compare(corpus, AdaTPConfig{}, opts);
        benchmark::DoNotOptimize(result.methods.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_ColumnMeans<false>)->Arg(32 * 196)->Arg(64 * 196);
BENCHMARK(BM_ColumnMeans<true>)->Arg(32 * 196)->Arg(64 * 196);
BENCHMARK(BM_PositionSums<false>)->Arg(32)->Arg(256);
BENCHMARK(BM_PositionSums<true>)->Arg(32)->Arg(256);
BENCHMARK(BM_RowCosines<false>)->Arg(32)->Arg(256);
BENCHMARK(BM_RowCosines<true>)->Arg(32)->Arg(256);
BENCHMARK(BM_Compare<false>)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Compare<true>)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
