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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tokenrank/types.hpp"

namespace tokenrank {

class Index;

inline constexpr std::size_t kDefaultShortlist = 1000;
inline constexpr std::array<std::size_t, 7> kShortlistSweep = {10, 50, 100, 200, 400, 1000, 5000};

struct Candidate {
    std::string image_id;
    double s_global = 0.0;

    friend bool
    operator==(const Candidate&, const Candidate&) = default;
};

struct Shortlist {
    std::string query_id;
    std::vector<Candidate> candidates;

    friend bool
    operator==(const Shortlist&, const Shortlist&) = default;
};

/// A view of N unit-norm descriptors (N x dim, row-major) and their ids.
struct GlobalTable {
    std::span<const std::string> ids;
    std::span<const float> vectors;
    std::size_t dim = 0;
};

/// Exact cosine top-k by full scan. Ties go to the smaller image id; the
/// result has min(k, N) entries. Errors: EmptyIndex, InvalidArgument (k = 0),
/// DimensionMismatch.
Shortlist
global_topk(const std::string& query_id,
            const GlobalDescriptor& query,
            const GlobalTable& table,
            std::size_t k,
            std::size_t jobs = 1);

Shortlist
global_topk(const std::string& query_id, const GlobalDescriptor& query, const Index& index, std::size_t k,
            std::size_t jobs = 1);

/// Inner product accumulated in double.
double
dot(std::span<const float> a, std::span<const float> b) noexcept;

/// Shortlist as a ranked list carrying only global scores.
RankedList
to_ranked_list(const Shortlist& shortlist);

}  // namespace tokenrank
