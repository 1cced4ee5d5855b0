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

#include "tokenrank/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tokenrank/error.hpp"
#include "tokenrank/search.hpp"

namespace tokenrank {

namespace {

std::vector<double>
norms(const TokenGrid& grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = std::sqrt(dot(grid.token(i), grid.token(i)));
    }
    return out;
}

}  // namespace

double
mock_chamfer_score(const TokenGrid& query, const TokenGrid& candidate) {
    if (query.dim() != candidate.dim()) {
        fail(ErrorCode::DimensionMismatch,
             "query D=" + std::to_string(query.dim()) + " vs candidate D=" + std::to_string(candidate.dim()));
    }
    const auto qn = norms(query);
    const auto cn = norms(candidate);
    double total = 0.0;
    for (std::size_t i = 0; i < query.size(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < candidate.size(); ++j) {
            double cos = 0.0;
            if (qn[i] > 0.0 && cn[j] > 0.0) {
                cos = std::clamp(dot(query.token(i), candidate.token(j)) / (qn[i] * cn[j]), -1.0, 1.0);
            }
            best = std::max(best, cos);
        }
        total += best;
    }
    const double s = total / static_cast<double>(query.size());
    return std::clamp((s + 1.0) / 2.0, 0.0, 1.0);
}

std::vector<double>
MockScorer::score_batch(const TokenGrid& query, std::span<const TokenGrid> candidates, PromptId) const {
    std::vector<double> out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        out.push_back(mock_chamfer_score(query, c));
    }
    return out;
}

}  // namespace tokenrank
