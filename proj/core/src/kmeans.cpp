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

#include "tokenrank/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "tokenrank/error.hpp"

namespace tokenrank {

namespace {

std::span<const float>
row(std::span<const float> data, std::size_t i, std::size_t dim) {
    return data.subspan(i * dim, dim);
}

// The seeding draws are derived from raw engine output so the sequence does
// not depend on the standard library's distribution implementations.
double
unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<float>
seed_plus_plus(std::span<const float> data, std::size_t n, std::size_t dim, std::size_t k, std::mt19937_64& rng) {
    std::vector<float> centroids;
    centroids.reserve(k * dim);
    std::vector<bool> chosen(n, false);

    std::size_t first = static_cast<std::size_t>(rng() % n);
    chosen[first] = true;
    auto first_row = row(data, first, dim);
    centroids.insert(centroids.end(), first_row.begin(), first_row.end());

    std::vector<double> closest(n);
    for (std::size_t i = 0; i < n; ++i) {
        closest[i] = squared_distance(row(data, i, dim), first_row);
    }

    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            total += chosen[i] ? 0.0 : closest[i];
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = unit_draw(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (chosen[i] || closest[i] <= 0.0) {
                    continue;
                }
                acc += closest[i];
                pick = i;
                if (acc > target) {
                    break;
                }
            }
        }
        if (pick == n) {
            // every remaining point coincides with a centroid
            pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
        }
        chosen[pick] = true;
        auto picked = row(data, pick, dim);
        centroids.insert(centroids.end(), picked.begin(), picked.end());
        for (std::size_t i = 0; i < n; ++i) {
            closest[i] = std::min(closest[i], squared_distance(row(data, i, dim), picked));
        }
    }
    return centroids;
}

}  // namespace

double
squared_distance(std::span<const float> a, std::span<const float> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += diff * diff;
    }
    return acc;
}

std::uint32_t
nearest_centroid(std::span<const float> point, std::span<const float> centroids, std::size_t dim) {
    const std::size_t k = centroids.size() / dim;
    std::uint32_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(point, row(centroids, c, dim));
        if (d < best_dist) {
            best_dist = d;
            best = static_cast<std::uint32_t>(c);
        }
    }
    return best;
}

KMeansResult
kmeans(std::span<const float> data, std::size_t n, std::size_t dim, const KMeansParams& params) {
    const std::size_t k = params.num_clusters;
    if (k == 0 || k > n) {
        fail(ErrorCode::InvalidArgument,
             "k-means needs 1 <= k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
    }
    if (dim == 0 || data.size() != n * dim) {
        fail(ErrorCode::DimensionMismatch, "k-means input is not n x dim");
    }

    std::mt19937_64 rng(params.seed);
    KMeansResult result;
    result.centroids = seed_plus_plus(data, n, dim, k, rng);
    result.assignment.assign(n, std::numeric_limits<std::uint32_t>::max());

    std::vector<std::uint32_t> next(n);
    std::vector<std::size_t> counts(k);
    std::vector<double> sums(k * dim);

    for (std::size_t iter = 0; iter < params.max_iterations; ++iter) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = nearest_centroid(row(data, i, dim), result.centroids, dim);
            ++counts[next[i]];
        }

        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) {
                continue;
            }
            std::size_t far = n;
            double far_dist = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[next[i]] <= 1) {
                    continue;
                }
                const double d = squared_distance(row(data, i, dim), row(result.centroids, next[i], dim));
                if (d > far_dist) {
                    far_dist = d;
                    far = i;
                }
            }
            // far < n holds: with n >= k an empty cluster implies a crowded one
            --counts[next[far]];
            next[far] = static_cast<std::uint32_t>(c);
            counts[c] = 1;
            auto p = row(data, far, dim);
            std::copy(p.begin(), p.end(), result.centroids.begin() + static_cast<std::ptrdiff_t>(c * dim));
        }

        result.iterations = iter + 1;
        if (next == result.assignment) {
            result.converged = true;
            break;
        }
        result.assignment = next;

        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto p = row(data, i, dim);
            double* s = sums.data() + static_cast<std::size_t>(next[i]) * dim;
            for (std::size_t j = 0; j < dim; ++j) {
                s[j] += p[j];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t j = 0; j < dim; ++j) {
                result.centroids[c * dim + j] = static_cast<float>(sums[c * dim + j] / static_cast<double>(counts[c]));
            }
        }
    }
    return result;
}

}  // namespace tokenrank
