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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "tokenrank/image.hpp"
#include "tokenrank/scorer.hpp"
#include "tokenrank/transforms.hpp"
#include "tokenrank/types.hpp"

namespace tokenrank {

/// Image -> token grid. Implementations must accept concurrent calls.
class Extractor {
public:
    virtual ~Extractor() = default;

    virtual TokenGrid
    extract(const Image& image) const = 0;

    virtual std::string
    id() const = 0;
};

/// Deterministic stand-in for a vision encoder: the image is area-resampled
/// to rows x cols cells of 4x4 pixels, each cell's 48 centred channel values
/// are projected by a fixed seeded Gaussian matrix to `dim` features.
class MockExtractor final : public Extractor {
public:
    static constexpr std::size_t kCellPixels = 4;

    MockExtractor(std::uint16_t rows = 8, std::uint16_t cols = 8, std::size_t dim = 32, std::uint64_t seed = 7);

    TokenGrid
    extract(const Image& image) const override;

    std::string
    id() const override;

private:
    std::uint16_t rows_;
    std::uint16_t cols_;
    std::size_t dim_;
    std::uint64_t seed_;
    std::vector<double> projection_;  // dim x 48
};

struct CurvePoint {
    double factor;
    double mean_similarity;
};

struct CurveOptions {
    std::uint64_t seed = 0;
    PromptId prompt = PromptId::Object;
    /// Background for kinds that need one; when absent, query i borrows
    /// query (i + 1) mod n.
    std::optional<Image> aux_image;
    std::size_t jobs = 1;
};

/// For each factor, scores every query against its own transformed copy and
/// averages over queries. Rows follow the order of `factors`. Stochastic
/// transforms of query i use seed + i. Errors: InvalidArgument (no queries),
/// MissingAuxImage, and whatever the extractor or scorer raise.
std::vector<CurvePoint>
robustness_curve(const Scorer& scorer,
                 const Extractor& extractor,
                 std::span<const Image> queries,
                 TransformKind kind,
                 std::span<const double> factors,
                 const CurveOptions& options = {});

/// First factor where the curve drops below `baseline`, linearly interpolated
/// between the bracketing points; the first factor itself if the curve starts
/// below. Factors must be strictly monotone in either direction.
/// Errors: InvalidArgument on non-monotone factors.
std::optional<double>
crossing_point(std::span<const CurvePoint> curve, double baseline);

/// `# kind=<k> n=<n> seed=<s> scorer=<id>` comment, then `factor,mean_similarity`.
void
write_curve_csv(std::ostream& out,
                std::span<const CurvePoint> curve,
                TransformKind kind,
                std::uint64_t seed,
                const std::string& scorer_id);

}  // namespace tokenrank
