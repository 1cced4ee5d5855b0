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
#include <span>
#include <vector>

namespace tokenrank {

struct KMeansParams {
    std::size_t num_clusters = 256;
    std::size_t max_iterations = 100;
    std::uint64_t seed = 0;
};

struct KMeansResult {
    std::vector<float> centroids;          // num_clusters x dim
    std::vector<std::uint32_t> assignment;  // one cluster per input row, every cluster non-empty
    std::size_t iterations = 0;
    bool converged = false;
};

/// Squared Euclidean distance accumulated in double.
double
squared_distance(std::span<const float> a, std::span<const float> b) noexcept;

/// Index of the nearest row of `centroids` (k x dim) to `point`; ties go to
/// the smaller index.
std::uint32_t
nearest_centroid(std::span<const float> point, std::span<const float> centroids, std::size_t dim);

/// Lloyd's k-means with k-means++ seeding.
///
/// Stops when an assignment pass changes nothing or after max_iterations.
/// A cluster left empty by an assignment pass is reseeded with the point
/// farthest from its own centroid (taken from a cluster with > 1 member).
/// Requires 1 <= num_clusters <= n.
KMeansResult
kmeans(std::span<const float> data, std::size_t n, std::size_t dim, const KMeansParams& params);

}  // namespace tokenrank
