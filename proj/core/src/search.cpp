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

#include "tokenrank/search.hpp"

#include <algorithm>

#include "tokenrank/error.hpp"
#include "tokenrank/index.hpp"
#include "tokenrank/parallel.hpp"

namespace tokenrank {

namespace {

constexpr std::size_t kScanChunk = 16384;

struct Scored {
    double score;
    std::size_t row;
};

}  // namespace

double
dot(std::span<const float> a, std::span<const float> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return acc;
}

Shortlist
global_topk(const std::string& query_id,
            const GlobalDescriptor& query,
            const GlobalTable& table,
            std::size_t k,
            std::size_t jobs) {
    if (k == 0) {
        fail(ErrorCode::InvalidArgument, "k must be at least 1");
    }
    const std::size_t n = table.ids.size();
    if (n == 0) {
        fail(ErrorCode::EmptyIndex, "no database descriptors to search");
    }
    if (query.dim() != table.dim || table.vectors.size() != n * table.dim) {
        fail(ErrorCode::DimensionMismatch,
             "query descriptor has " + std::to_string(query.dim()) + " dims, database has " +
                 std::to_string(table.dim));
    }

    auto better = [&](const Scored& a, const Scored& b) {
        return ranks_before(a.score, table.ids[a.row], b.score, table.ids[b.row]);
    };

    const std::size_t chunks = (n + kScanChunk - 1) / kScanChunk;
    std::vector<std::vector<Scored>> partial(chunks);
    parallel_for(chunks, jobs, [&](std::size_t c) {
        const std::size_t begin = c * kScanChunk;
        const std::size_t end = std::min(n, begin + kScanChunk);
        auto& out = partial[c];
        out.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            out.push_back({dot(query.vector(), table.vectors.subspan(i * table.dim, table.dim)), i});
        }
        const std::size_t keep = std::min(k, out.size());
        std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(), better);
        out.resize(keep);
    });

    std::vector<Scored> merged;
    for (auto& p : partial) {
        merged.insert(merged.end(), p.begin(), p.end());
    }
    const std::size_t keep = std::min(k, merged.size());
    std::partial_sort(merged.begin(), merged.begin() + static_cast<std::ptrdiff_t>(keep), merged.end(), better);

    Shortlist shortlist;
    shortlist.query_id = query_id;
    shortlist.candidates.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        shortlist.candidates.push_back({table.ids[merged[i].row], merged[i].score});
    }
    return shortlist;
}

Shortlist
global_topk(const std::string& query_id, const GlobalDescriptor& query, const Index& index, std::size_t k,
            std::size_t jobs) {
    return global_topk(query_id, query, GlobalTable{index.ids(), index.globals(), index.global_dim()}, k, jobs);
}

RankedList
to_ranked_list(const Shortlist& shortlist) {
    RankedList list;
    list.query_id = shortlist.query_id;
    list.items.reserve(shortlist.candidates.size());
    for (const auto& c : shortlist.candidates) {
        list.items.push_back({c.image_id, c.s_global, std::nullopt, std::nullopt});
    }
    return list;
}

}  // namespace tokenrank
