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
#include <vector>

#include "tokenrank/image.hpp"
#include "tokenrank/qrels.hpp"
#include "tokenrank/types.hpp"

namespace tokenrank {

/// Seeded instance-retrieval corpus with known structure.
///
/// Every group owns a set of prototype tokens and a global centroid. Database
/// images of a group carry noisy copies of some of its prototypes among shared
/// background tokens; their globals scatter around the group centroid. Each
/// group has one query (not in the database) carrying most of the prototypes.
/// For the first `misleading_groups` groups the query global is pulled
/// towards another group's centroid, so the first stage ranks the wrong
/// instance highest while token evidence still points at the right one.
struct SyntheticConfig {
    std::size_t groups = 20;
    std::size_t images_per_group = 10;
    std::size_t misleading_groups = 5;
    std::uint16_t rows = 4;
    std::uint16_t cols = 4;
    std::size_t dim = 32;
    std::size_t global_dim = 64;
    std::size_t prototypes = 12;
    /// Prototype tokens planted in each database image.
    std::size_t planted = 7;
    /// Prototype tokens planted in each query.
    std::size_t query_planted = 12;
    std::size_t background_pool = 48;
    double token_noise = 0.35;
    double global_noise = 0.45;
    /// Query global = normalize(a * own + b * other + noise) for misleading groups.
    double misleading_own = 0.55;
    double misleading_other = 0.835;
    std::uint64_t seed = 2026;
};

struct SyntheticCorpus {
    std::vector<ImageRecord> database;
    std::vector<ImageRecord> queries;
    /// Positives are the query's group; group label "misleading" or "clean".
    Qrels qrels;
};

/// Tokens are exactly representable as 16-bit floats. Errors: InvalidArgument
/// on inconsistent sizes.
SyntheticCorpus
make_synthetic_corpus(const SyntheticConfig& config = {});

/// Smooth colour gradients plus a few seeded rectangles; useful as a test
/// pattern for image transforms.
Image
make_test_image(std::size_t width, std::size_t height, std::uint64_t seed);

}  // namespace tokenrank
