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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "tokenrank/similarity.hpp"
#include "tokenrank/types.hpp"

namespace tokenrank {

/// Pairwise query/candidate similarity in [0, 1]. Implementations must accept
/// concurrent score_batch calls and return one score per candidate, in order.
class Scorer {
public:
    virtual ~Scorer() = default;

    virtual std::vector<double>
    score_batch(const TokenGrid& query, std::span<const TokenGrid> candidates, PromptId prompt) const = 0;

    /// Stable identifier written into exported results.
    virtual std::string
    id() const = 0;
};

/// Normalized Chamfer similarity: mean over query tokens of the best cosine
/// against any candidate token, mapped from [-1, 1] to [0, 1]. A zero vector
/// has cosine 0 against everything. Errors: DimensionMismatch.
double
mock_chamfer_score(const TokenGrid& query, const TokenGrid& candidate);

/// Deterministic scorer backed by mock_chamfer_score; ignores the prompt.
class MockScorer final : public Scorer {
public:
    static constexpr const char* kId = "mock-chamfer-v1";

    std::vector<double>
    score_batch(const TokenGrid& query, std::span<const TokenGrid> candidates, PromptId prompt) const override;

    std::string
    id() const override {
        return kId;
    }
};

}  // namespace tokenrank
