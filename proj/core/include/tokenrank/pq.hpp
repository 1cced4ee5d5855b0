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
#include <filesystem>
#include <span>
#include <vector>

#include "tokenrank/types.hpp"

namespace tokenrank {

/// Product-quantization codebooks: the D-dimensional token space is split into
/// D/d contiguous subspaces of d dimensions, each with K centroids. With
/// K <= 256 every code fits in one byte, so a token costs D/d bytes.
class PqCodebooks {
public:
    static constexpr std::size_t kDefaultCentroids = 256;
    static constexpr std::size_t kMaxCentroids = 256;

    /// `centroids` is laid out (subspace, centroid, dim).
    PqCodebooks(std::size_t dim,
                std::size_t sub_dim,
                std::size_t num_centroids,
                std::uint64_t trained_on,
                std::vector<float> centroids);

    std::size_t
    dim() const noexcept {
        return dim_;
    }

    std::size_t
    sub_dim() const noexcept {
        return sub_dim_;
    }

    std::size_t
    num_subspaces() const noexcept {
        return dim_ / sub_dim_;
    }

    std::size_t
    num_centroids() const noexcept {
        return num_centroids_;
    }

    std::uint64_t
    trained_on() const noexcept {
        return trained_on_;
    }

    /// All K centroids of one subspace, K x d.
    std::span<const float>
    subspace(std::size_t s) const noexcept {
        return {centroids_.data() + s * num_centroids_ * sub_dim_, num_centroids_ * sub_dim_};
    }

    std::span<const float>
    centroid(std::size_t s, std::size_t k) const noexcept {
        return {centroids_.data() + (s * num_centroids_ + k) * sub_dim_, sub_dim_};
    }

    std::span<const float>
    centroids() const noexcept {
        return centroids_;
    }

    friend bool
    operator==(const PqCodebooks&, const PqCodebooks&) = default;

private:
    std::size_t dim_;
    std::size_t sub_dim_;
    std::size_t num_centroids_;
    std::uint64_t trained_on_;
    std::vector<float> centroids_;
};

/// M x (D/d) one-byte codes, row-major.
struct PqCodes {
    std::size_t num_tokens = 0;
    std::size_t num_subspaces = 0;
    std::vector<std::uint8_t> codes;

    std::span<const std::uint8_t>
    row(std::size_t m) const noexcept {
        return {codes.data() + m * num_subspaces, num_subspaces};
    }

    std::size_t
    size_bytes() const noexcept {
        return codes.size();
    }

    friend bool
    operator==(const PqCodes&, const PqCodes&) = default;
};

struct PqTrainParams {
    std::size_t sub_dim = 16;
    std::size_t num_centroids = PqCodebooks::kDefaultCentroids;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 100;
    std::size_t jobs = 0;  // 0 = hardware concurrency
};

/// Trains one k-means per subspace over `vectors` (n x dim, row-major).
/// Subspace s uses seed `params.seed + s`.
/// Errors: IndivisibleDimension, TooFewVectors (n < K), InvalidArgument.
PqCodebooks
train_codebooks(std::span<const float> vectors, std::size_t dim, const PqTrainParams& params);

/// Nearest-centroid codes for each row of `vectors`; ties go to the smaller index.
PqCodes
encode(std::span<const float> vectors, const PqCodebooks& codebooks);

/// Errors: DimensionMismatch.
PqCodes
encode(const TokenGrid& grid, const PqCodebooks& codebooks);

/// Concatenates the selected centroids of every subspace. Errors: CodeOutOfRange.
std::vector<float>
reconstruct(const PqCodes& codes, const PqCodebooks& codebooks);

/// Mean over rows of the squared reconstruction error.
double
mean_reconstruction_error(std::span<const float> vectors, const PqCodebooks& codebooks);

/// Codebook file: magic "PQCB", u16 version, u32 D, u32 d, u32 K,
/// u64 trained_on, then float32 centroids in (subspace, centroid, dim) order.
std::vector<std::uint8_t>
serialize_codebooks(const PqCodebooks& codebooks);

PqCodebooks
deserialize_codebooks(std::span<const std::uint8_t> bytes);

void
save_codebooks(const std::filesystem::path& path, const PqCodebooks& codebooks);

PqCodebooks
load_codebooks(const std::filesystem::path& path);

}  // namespace tokenrank
