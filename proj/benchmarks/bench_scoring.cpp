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

#include "tokenrank/scorer.hpp"
#include "tokenrank/similarity.hpp"

namespace {

using namespace tokenrank;

TokenGrid
grid(std::uint64_t seed, std::size_t tokens, std::size_t dim) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> g;
    std::vector<float> t(tokens * dim);
    for (auto& x : t) {
        x = g(rng);
    }
    return TokenGrid::dense(std::move(t), dim, 1, static_cast<std::uint16_t>(tokens));
}

// Mock re-rank score of one shortlist of 50 candidates.
void
BM_ChamferShortlist(benchmark::State& state) {
    const auto tokens = static_cast<std::size_t>(state.range(0));
    const auto query = grid(1, tokens, 256);
    std::vector<TokenGrid> cands;
    for (std::uint64_t i = 0; i < 50; ++i) {
        cands.push_back(grid(100 + i, tokens, 256));
    }
    const MockScorer scorer;
    for (auto _ : state) {
        benchmark::DoNotOptimize(scorer.score_batch(query, cands, PromptId::Object));
    }
}
BENCHMARK(BM_ChamferShortlist)->Arg(16)->Arg(75)->Unit(benchmark::kMillisecond);

void
BM_TwoTokenFuse(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    std::vector<double> logits(2048);
    for (auto& l : logits) {
        l = u(rng);
    }
    const FusionConfig cfg;
    for (auto _ : state) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < logits.size(); i += 2) {
            acc += fuse(0.1, two_token_similarity(logits[i], logits[i + 1]), cfg);
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_TwoTokenFuse);

}  // namespace
