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
#include <cstdint>
#include <string>
#include <string_view>

#include "tokenrank/types.hpp"

namespace tokenrank {

enum class SelectionStrategy { None, Prune, Cluster, Sample2x2, Pool2x2 };

struct SelectionConfig {
    SelectionStrategy strategy = SelectionStrategy::None;
    std::size_t target_count = 0;  // prune / cluster only
    std::uint64_t seed = 0;        // cluster only

    static SelectionConfig
    none() {
        return {};
    }

    static SelectionConfig
    prune(std::size_t count) {
        return {SelectionStrategy::Prune, count, 0};
    }

    static SelectionConfig
    cluster(std::size_t count, std::uint64_t seed = 0) {
        return {SelectionStrategy::Cluster, count, seed};
    }

    static SelectionConfig
    sample2x2() {
        return {SelectionStrategy::Sample2x2, 0, 0};
    }

    static SelectionConfig
    pool2x2() {
        return {SelectionStrategy::Pool2x2, 0, 0};
    }

    friend bool
    operator==(const SelectionConfig&, const SelectionConfig&) = default;
};

/// Accepts `none`, `prune:N`, `cluster:N`, `cluster:N:SEED`, `sample2x2`,
/// `pool2x2`. Errors: InvalidArgument.
SelectionConfig
parse_selection(std::string_view text);

/// Canonical text form; parse_selection(format_selection(c)) == c.
std::string
format_selection(const SelectionConfig& config);

/// Greedy max-min (farthest-point) pruning to m tokens. The first pick is
/// the token whose nearest neighbour is farthest away; each further pick
/// maximizes its distance to the closest already-selected token. Ties go to
/// the smaller original index. Rows keep their vectors and positions and are
/// returned in original order. Errors: TargetTooLarge, InvalidArgument (m = 0).
TokenGrid
prune_divprune(const TokenGrid& grid, std::size_t m);

/// k-means over the token vectors. Output vectors are the k centroids; each
/// takes the position of its cluster medoid (the member nearest the
/// centroid, ties to the smaller index). Rows are ordered by medoid index.
/// Errors: TargetTooLarge, InvalidArgument (k = 0).
TokenGrid
select_kmeans(const TokenGrid& grid, std::size_t k, std::uint64_t seed);

/// Keeps the top-left token of every non-overlapping 2x2 window (trailing
/// odd windows shrink to 1x2, 2x1 or 1x1). Errors: NonRectangularGrid.
TokenGrid
sample_uniform_2x2(const TokenGrid& grid);

/// Replaces each 2x2 window by the mean of its members, placed at the
/// window's top-left position. Errors: NonRectangularGrid.
TokenGrid
pool_average_2x2(const TokenGrid& grid);

/// Token count after a 2x2 window reduction: ceil(rows/2) * ceil(cols/2).
constexpr std::size_t
windows_2x2(std::size_t rows, std::size_t cols) {
    return ((rows + 1) / 2) * ((cols + 1) / 2);
}

TokenGrid
apply_selection(const TokenGrid& grid, const SelectionConfig& config);

}  // namespace tokenrank
