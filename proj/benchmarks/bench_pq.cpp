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

#include "tokenrank/pq.hpp"

namespace {

using namespace tokenrank;

std::vector<float>
gaussian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> g;
    std::vector<float> v(n);
    for (auto& x : v) {
        x = g(rng);
    }
    return v;
}

// 300 tokens of dimension 3584, one image worth.
void
BM_PqEncode(benchmark::State& state) {
    constexpr std::size_t kTokens = 300;
    constexpr std::size_t kDim = 3584;
    const auto d = static_cast<std::size_t>(state.range(0));
    const PqCodebooks cb(kDim, d, 256, 0, gaussian(256 * kDim, 1));
    const auto tokens = gaussian(kTokens * kDim, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(encode(tokens, cb));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kTokens));
}
BENCHMARK(BM_PqEncode)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void
BM_PqReconstruct(benchmark::State& state) {
    constexpr std::size_t kTokens = 300;
    constexpr std::size_t kDim = 3584;
    const PqCodebooks cb(kDim, 4, 256, 0, gaussian(256 * kDim, 1));
    const auto codes = encode(gaussian(kTokens * kDim, 2), cb);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reconstruct(codes, cb));
    }
}
BENCHMARK(BM_PqReconstruct)->Unit(benchmark::kMicrosecond);

void
BM_PqTrain(benchmark::State& state) {
    const auto data = gaussian(4096 * 32, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(train_codebooks(data, 32, {4, 256, 0, 10, 1}));
    }
}
BENCHMARK(BM_PqTrain)->Unit(benchmark::kMillisecond);

}  // namespace
