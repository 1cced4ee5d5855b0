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

#include "tokenrank/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "tokenrank/error.hpp"

namespace tokenrank {

namespace {

double
squared_norm(std::span<const float> v) {
    double acc = 0.0;
    for (float x : v) {
        acc += static_cast<double>(x) * x;
    }
    return acc;
}

}  // namespace

TokenGrid::TokenGrid(std::vector<float> tokens,
                     std::size_t dim,
                     std::vector<GridPos> positions,
                     std::uint16_t grid_rows,
                     std::uint16_t grid_cols)
    : tokens_(std::move(tokens)),
      dim_(dim),
      positions_(std::move(positions)),
      grid_rows_(grid_rows),
      grid_cols_(grid_cols) {
    if (dim_ == 0) {
        fail(ErrorCode::InvalidGrid, "token dimension must be positive");
    }
    if (positions_.empty()) {
        fail(ErrorCode::InvalidGrid, "a token grid needs at least one token");
    }
    if (tokens_.size() != positions_.size() * dim_) {
        fail(ErrorCode::InvalidGrid,
             "token buffer holds " + std::to_string(tokens_.size()) + " values, expected " +
                 std::to_string(positions_.size()) + " x " + std::to_string(dim_));
    }
    std::set<GridPos> seen;
    for (const auto& p : positions_) {
        if (p.row >= grid_rows_ || p.col >= grid_cols_) {
            fail(ErrorCode::InvalidGrid,
                 "position (" + std::to_string(p.row) + "," + std::to_string(p.col) +
                     ") outside " + std::to_string(grid_rows_) + "x" + std::to_string(grid_cols_));
        }
        if (!seen.insert(p).second) {
            fail(ErrorCode::InvalidGrid,
                 "duplicate position (" + std::to_string(p.row) + "," + std::to_string(p.col) +
                     ")");
        }
    }
}

TokenGrid
TokenGrid::dense(std::vector<float> tokens, std::size_t dim, std::uint16_t rows, std::uint16_t cols) {
    std::vector<GridPos> positions;
    positions.reserve(static_cast<std::size_t>(rows) * cols);
    for (std::uint16_t r = 0; r < rows; ++r) {
        for (std::uint16_t c = 0; c < cols; ++c) {
            positions.push_back({r, c});
        }
    }
    return TokenGrid(std::move(tokens), dim, std::move(positions), rows, cols);
}

GlobalDescriptor::GlobalDescriptor(std::vector<float> vector) : vector_(std::move(vector)) {
    if (vector_.empty()) {
        fail(ErrorCode::InvalidArgument, "global descriptor is empty");
    }
    const double norm = std::sqrt(squared_norm(vector_));
    if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
        fail(ErrorCode::InvalidArgument,
             "global descriptor norm " + std::to_string(norm) + " is not 1");
    }
}

GlobalDescriptor
GlobalDescriptor::normalized(std::vector<float> vector) {
    const double norm = std::sqrt(squared_norm(vector));
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        fail(ErrorCode::InvalidArgument, "cannot normalize a zero or non-finite descriptor");
    }
    for (auto& x : vector) {
        x = static_cast<float>(x / norm);
    }
    return GlobalDescriptor(std::move(vector));
}

bool
is_valid_image_id(std::string_view id) {
    if (id.empty()) {
        return false;
    }
    return std::none_of(id.begin(), id.end(), [](char c) {
        return c == ',' || c == '\t' || static_cast<unsigned char>(c) < 0x20;
    });
}

CorpusSummary
validate_corpus(std::span<const ImageRecord> records) {
    if (records.empty()) {
        fail(ErrorCode::EmptyCorpus, "corpus has no images");
    }
    CorpusSummary summary;
    summary.num_images = records.size();
    summary.token_dim = records.front().grid.dim();
    summary.global_dim = records.front().global.dim();
    summary.min_tokens = records.front().grid.size();
    summary.max_tokens = records.front().grid.size();

    std::unordered_set<std::string_view> ids;
    for (const auto& rec : records) {
        if (!is_valid_image_id(rec.image_id)) {
            fail(ErrorCode::InvalidArgument, "invalid image id '" + rec.image_id + "'");
        }
        if (!ids.insert(rec.image_id).second) {
            fail(ErrorCode::DuplicateId, "image id '" + rec.image_id + "' appears twice");
        }
        if (rec.grid.dim() != summary.token_dim) {
            fail(ErrorCode::DimensionMismatch,
                 "image '" + rec.image_id + "' has token dimension " +
                     std::to_string(rec.grid.dim()) + ", corpus uses " +
                     std::to_string(summary.token_dim));
        }
        if (rec.global.dim() != summary.global_dim) {
            fail(ErrorCode::DimensionMismatch,
                 "image '" + rec.image_id + "' has descriptor dimension " +
                     std::to_string(rec.global.dim()) + ", corpus uses " +
                     std::to_string(summary.global_dim));
        }
        summary.min_tokens = std::min(summary.min_tokens, rec.grid.size());
        summary.max_tokens = std::max(summary.max_tokens, rec.grid.size());
    }
    return summary;
}

void
sort_by_active_score(RankedList& list) {
    std::stable_sort(list.items.begin(), list.items.end(), [](const RankedItem& a, const RankedItem& b) {
        return ranks_before(a.active_score(), a.image_id, b.active_score(), b.image_id);
    });
}

bool
is_sorted_by_active_score(const RankedList& list) {
    return std::is_sorted(list.items.begin(), list.items.end(), [](const RankedItem& a, const RankedItem& b) {
        return ranks_before(a.active_score(), a.image_id, b.active_score(), b.image_id);
    });
}

}  // namespace tokenrank
