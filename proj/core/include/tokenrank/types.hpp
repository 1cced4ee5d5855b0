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
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tokenrank {

struct GridPos {
    std::uint16_t row = 0;
    std::uint16_t col = 0;

    friend bool
    operator==(const GridPos&, const GridPos&) = default;
    friend auto
    operator<=>(const GridPos&, const GridPos&) = default;
};

/// A per-image sequence of M visual token embeddings (M x D, row-major) with
/// their 2-D positions on a grid_rows x grid_cols patch grid.
///
/// Construction validates every invariant: M >= 1, one position per token,
/// positions inside the grid and pairwise distinct. Immutable afterwards.
class TokenGrid {
public:
    TokenGrid(std::vector<float> tokens,
              std::size_t dim,
              std::vector<GridPos> positions,
              std::uint16_t grid_rows,
              std::uint16_t grid_cols);

    /// Dense row-major grid: token i sits at (i / cols, i % cols).
    static TokenGrid
    dense(std::vector<float> tokens, std::size_t dim, std::uint16_t rows, std::uint16_t cols);

    std::size_t
    size() const noexcept {
        return positions_.size();
    }

    std::size_t
    dim() const noexcept {
        return dim_;
    }

    std::span<const float>
    token(std::size_t i) const noexcept {
        return {tokens_.data() + i * dim_, dim_};
    }

    std::span<const float>
    tokens() const noexcept {
        return tokens_;
    }

    std::span<const GridPos>
    positions() const noexcept {
        return positions_;
    }

    std::uint16_t
    grid_rows() const noexcept {
        return grid_rows_;
    }

    std::uint16_t
    grid_cols() const noexcept {
        return grid_cols_;
    }

    friend bool
    operator==(const TokenGrid&, const TokenGrid&) = default;

private:
    std::vector<float> tokens_;
    std::size_t dim_;
    std::vector<GridPos> positions_;
    std::uint16_t grid_rows_;
    std::uint16_t grid_cols_;
};

/// Unit-norm global descriptor used by the first-stage search.
class GlobalDescriptor {
public:
    static constexpr double kNormTolerance = 1e-6;

    /// Throws InvalidArgument unless the vector has unit norm within tolerance.
    explicit GlobalDescriptor(std::vector<float> vector);

    /// Scales an arbitrary non-zero vector to unit norm.
    static GlobalDescriptor
    normalized(std::vector<float> vector);

    std::span<const float>
    vector() const noexcept {
        return vector_;
    }

    std::size_t
    dim() const noexcept {
        return vector_.size();
    }

    friend bool
    operator==(const GlobalDescriptor&, const GlobalDescriptor&) = default;

private:
    std::vector<float> vector_;
};

struct ImageRecord {
    std::string image_id;
    GlobalDescriptor global;
    TokenGrid grid;
};

struct CorpusSummary {
    std::size_t num_images = 0;
    std::size_t token_dim = 0;
    std::size_t global_dim = 0;
    std::size_t min_tokens = 0;
    std::size_t max_tokens = 0;

    friend bool
    operator==(const CorpusSummary&, const CorpusSummary&) = default;
};

/// Checks id uniqueness and dimension consistency across a corpus.
/// Errors: EmptyCorpus, DuplicateId, DimensionMismatch, InvalidArgument (empty id).
CorpusSummary
validate_corpus(std::span<const ImageRecord> records);

/// Ids travel through CSV/TSV files and length-prefixed binary fields, so
/// separators and control characters are rejected.
bool
is_valid_image_id(std::string_view id);

struct RankedItem {
    std::string image_id;
    double s_global = 0.0;
    std::optional<double> s_rerank;
    std::optional<double> s_fused;

    /// The fused score when present, otherwise the global score.
    double
    active_score() const noexcept {
        return s_fused.value_or(s_global);
    }

    friend bool
    operator==(const RankedItem&, const RankedItem&) = default;
};

struct RankedList {
    std::string query_id;
    std::vector<RankedItem> items;

    friend bool
    operator==(const RankedList&, const RankedList&) = default;
};

/// Ordering used everywhere: higher score first, ties by ascending image id.
inline bool
ranks_before(double score_a, const std::string& id_a, double score_b, const std::string& id_b) {
    if (score_a != score_b) {
        return score_a > score_b;
    }
    return id_a < id_b;
}

void
sort_by_active_score(RankedList& list);

bool
is_sorted_by_active_score(const RankedList& list);

}  // namespace tokenrank
