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
#include <string>
#include <vector>

#include "tokenrank/search.hpp"

namespace {

using namespace tokenrank;

struct Table {
    std::vector<std::string> ids;
    std::vector<float> vectors;
    std::size_t dim;
};

Table
make_table(std::size_t n, std::size_t dim) {
    std::mt19937_64 rng(7);
    std::normal_distribution<float> g;
    Table t{{}, {}, dim};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<float> v(dim);
        for (auto& x : v) {
            x = g(rng);
        }
        const auto unit = GlobalDescriptor::normalized(std::move(v));
        t.vectors.insert(t.vectors.end(), unit.vector().begin(), unit.vector().end());
        t.ids.push_back("img" + std::to_string(i));
    }
    return t;
}

void
BM_GlobalTopK(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto k = static_cast<std::size_t>(state.range(1));
    const auto t = make_table(n, 768);
    const GlobalTable view{t.ids, t.vectors, t.dim};
    const auto query = GlobalDescriptor::normalized(std::vector<float>(t.vectors.begin(), t.vectors.begin() + 768));
    for (auto _ : state) {
        benchmark::DoNotOptimize(global_topk("q", query, view, k));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_GlobalTopK)->Args({10000, 100})->Args({100000, 100})->Args({100000, 1000})->Unit(benchmark::kMillisecond);

}  // namespace
