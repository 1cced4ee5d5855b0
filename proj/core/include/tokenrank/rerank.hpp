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

#include <cstddef>
#include <functional>
#include <string>

#include "tokenrank/scorer.hpp"
#include "tokenrank/search.hpp"
#include "tokenrank/similarity.hpp"
#include "tokenrank/types.hpp"

namespace tokenrank {

class Index;

/// Resolves a candidate id to its token grid.
using GridSource = std::function<TokenGrid(const std::string& image_id)>;

struct RerankOptions {
    FusionConfig fusion;
    PromptId prompt = PromptId::Object;
    /// Candidates handed to the scorer per call.
    std::size_t batch_size = 64;
    /// Scorer calls in flight for one query.
    std::size_t jobs = 1;
};

/// Scores every shortlisted candidate against the query grid, fuses with the
/// global score and sorts (ties by image id). Any fetch or scorer failure
/// fails the whole query. Errors: InvalidArgument (empty shortlist), plus
/// whatever the grid source or scorer raise.
RankedList
rerank(const Shortlist& shortlist,
       const GridSource& grids,
       const TokenGrid& query,
       const Scorer& scorer,
       const RerankOptions& options = {});

RankedList
rerank(const Shortlist& shortlist,
       const Index& index,
       const TokenGrid& query,
       const Scorer& scorer,
       const RerankOptions& options = {});

}  // namespace tokenrank
