// Copyright 2026-present the tokenrank project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tokenrank/tokensel.hpp"

namespace {

using namespace tokenrank;

TokenGrid
grid(std::uint16_t rows, std::uint16_t cols, std::size_t dim) {
    std::mt19937_64 rng(5);
    std::normal_distribution<float> g;
    std::vector<float> t(static_cast<std::size_t>(rows) * cols * dim);
    for (auto& x : t) {
        x = g(rng);
    }
    return TokenGrid::dense(std::move(t), dim, rows, cols);
}

void
BM_DivPrune(benchmark::State& state) {
    const auto g = grid(15, 20, 512);
    const auto m = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(prune_divprune(g, m));
    }
}
BENCHMARK(BM_DivPrune)->Arg(75)->Arg(150)->Unit(benchmark::kMillisecond);

void
BM_ClusterSelect(benchmark::State& state) {
    const auto g = grid(15, 20, 512);
    for (auto _ : state) {
        benchmark::DoNotOptimize(select_kmeans(g, 75, 1));
    }
}
BENCHMARK(BM_ClusterSelect)->Unit(benchmark::kMillisecond);

void
BM_Pool2x2(benchmark::State& state) {
    const auto g = grid(15, 20, 3584);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pool_average_2x2(g));
    }
}
BENCHMARK(BM_Pool2x2)->Unit(benchmark::kMicrosecond);

}  // namespace
