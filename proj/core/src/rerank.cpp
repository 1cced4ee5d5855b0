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

#include "tokenrank/rerank.hpp"

#include <algorithm>

#include "tokenrank/error.hpp"
#include "tokenrank/index.hpp"
#include "tokenrank/parallel.hpp"

namespace tokenrank {

RankedList
rerank(const Shortlist& shortlist,
       const GridSource& grids,
       const TokenGrid& query,
       const Scorer& scorer,
       const RerankOptions& options) {
    const std::size_t n = shortlist.candidates.size();
    if (n == 0) {
        fail(ErrorCode::InvalidArgument, "shortlist for query '" + shortlist.query_id + "' is empty");
    }
    const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
    const std::size_t batches = n / batch + (n % batch != 0 ? 1 : 0);

    std::vector<double> scores(n);
    parallel_for(batches, std::max<std::size_t>(1, options.jobs), [&](std::size_t b) {
        const std::size_t begin = b * batch;
        const std::size_t end = std::min(n, begin + batch);
        std::vector<TokenGrid> cands;
        cands.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            cands.push_back(grids(shortlist.candidates[i].image_id));
        }
        const auto out = scorer.score_batch(query, cands, options.prompt);
        if (out.size() != cands.size()) {
            fail(ErrorCode::ProtocolMismatch, "scorer returned " + std::to_string(out.size()) + " scores for " +
                                                  std::to_string(cands.size()) + " candidates");
        }
        std::copy(out.begin(), out.end(), scores.begin() + static_cast<std::ptrdiff_t>(begin));
    });

    RankedList list;
    list.query_id = shortlist.query_id;
    list.items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = shortlist.candidates[i];
        list.items.push_back({c.image_id, c.s_global, scores[i], fuse(c.s_global, scores[i], options.fusion)});
    }
    sort_by_active_score(list);
    return list;
}

RankedList
rerank(const Shortlist& shortlist,
       const Index& index,
       const TokenGrid& query,
       const Scorer& scorer,
       const RerankOptions& options) {
    return rerank(
        shortlist, [&index](const std::string& id) { return index.fetch_tokens(id); }, query, scorer, options);
}

}  // namespace tokenrank
