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

#include "tokenrank/robustness.hpp"

#include <cstdio>
#include <random>

#include "tokenrank/error.hpp"
#include "tokenrank/parallel.hpp"

namespace tokenrank {

namespace {

constexpr std::size_t kCellFeatures = MockExtractor::kCellPixels * MockExtractor::kCellPixels * Image::kChannels;

std::string
format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

MockExtractor::MockExtractor(std::uint16_t rows, std::uint16_t cols, std::size_t dim, std::uint64_t seed)
    : rows_(rows), cols_(cols), dim_(dim), seed_(seed) {
    if (rows == 0 || cols == 0 || dim == 0) {
        fail(ErrorCode::InvalidArgument, "mock extractor needs positive rows, cols and dim");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    projection_.resize(dim * kCellFeatures);
    for (auto& w : projection_) {
        w = z(rng);
    }
}

TokenGrid
MockExtractor::extract(const Image& image) const {
    const Image small = resize_area(image, cols_ * kCellPixels, rows_ * kCellPixels);
    std::vector<float> tokens(static_cast<std::size_t>(rows_) * cols_ * dim_);
    std::vector<double> cell(kCellFeatures);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            double mean = 0.0;
            std::size_t k = 0;
            for (std::size_t y = 0; y < kCellPixels; ++y) {
                const auto* p = small.at(c * kCellPixels, r * kCellPixels + y);
                for (std::size_t i = 0; i < kCellPixels * Image::kChannels; ++i) {
                    cell[k] = p[i] / 255.0;
                    mean += cell[k++];
                }
            }
            mean /= static_cast<double>(kCellFeatures);
            float* out = &tokens[(r * cols_ + c) * dim_];
            for (std::size_t d = 0; d < dim_; ++d) {
                const double* w = &projection_[d * kCellFeatures];
                // cell mean doubles as a bias term
                double acc = mean;
                for (std::size_t i = 0; i < kCellFeatures; ++i) {
                    acc += w[i] * (cell[i] - mean);
                }
                out[d] = static_cast<float>(acc);
            }
        }
    }
    return TokenGrid::dense(std::move(tokens), dim_, rows_, cols_);
}

std::string
MockExtractor::id() const {
    return "mock-extractor-v1:" + std::to_string(rows_) + "x" + std::to_string(cols_) + "x" + std::to_string(dim_) +
           ":" + std::to_string(seed_);
}

std::vector<CurvePoint>
robustness_curve(const Scorer& scorer,
                 const Extractor& extractor,
                 std::span<const Image> queries,
                 TransformKind kind,
                 std::span<const double> factors,
                 const CurveOptions& options) {
    if (queries.empty()) {
        fail(ErrorCode::InvalidArgument, "robustness curve needs at least one query image");
    }
    const bool aux = needs_aux_image(kind);
    if (aux && !options.aux_image && queries.size() < 2) {
        fail(ErrorCode::MissingAuxImage,
             std::string(to_string(kind)) + " needs an auxiliary image or at least two query images");
    }

    const std::size_t nq = queries.size();
    std::vector<TokenGrid> originals;
    originals.reserve(nq);
    for (const auto& q : queries) {
        originals.push_back(extractor.extract(q));
    }

    std::vector<double> scores(factors.size() * nq);
    parallel_for(scores.size(), options.jobs, [&](std::size_t job) {
        const std::size_t fi = job / nq;
        const std::size_t qi = job % nq;
        TransformSpec spec;
        spec.kind = kind;
        spec.factor = factors[fi];
        spec.seed = options.seed + qi;
        if (aux) {
            spec.aux_image = options.aux_image ? *options.aux_image : queries[(qi + 1) % nq];
        }
        const TokenGrid transformed = extractor.extract(apply_transform(queries[qi], spec));
        const auto s = scorer.score_batch(originals[qi], std::span<const TokenGrid>(&transformed, 1), options.prompt);
        if (s.size() != 1) {
            fail(ErrorCode::ProtocolMismatch, "scorer returned " + std::to_string(s.size()) + " scores for 1 pair");
        }
        scores[job] = s[0];
    });

    std::vector<CurvePoint> curve;
    curve.reserve(factors.size());
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
        double sum = 0.0;
        for (std::size_t qi = 0; qi < nq; ++qi) {
            sum += scores[fi * nq + qi];
        }
        curve.push_back({factors[fi], sum / static_cast<double>(nq)});
    }
    return curve;
}

std::optional<double>
crossing_point(std::span<const CurvePoint> curve, double baseline) {
    if (curve.empty()) {
        return std::nullopt;
    }
    if (curve.size() > 1) {
        const bool up = curve[1].factor > curve[0].factor;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            const bool ok = up ? curve[i].factor > curve[i - 1].factor : curve[i].factor < curve[i - 1].factor;
            if (!ok) {
                fail(ErrorCode::InvalidArgument, "curve factors must be strictly monotone");
            }
        }
    }
    if (curve[0].mean_similarity < baseline) {
        return curve[0].factor;
    }
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i].mean_similarity < baseline) {
            const auto& a = curve[i - 1];
            const auto& b = curve[i];
            const double t = (a.mean_similarity - baseline) / (a.mean_similarity - b.mean_similarity);
            return a.factor + t * (b.factor - a.factor);
        }
    }
    return std::nullopt;
}

void
write_curve_csv(std::ostream& out,
                std::span<const CurvePoint> curve,
                TransformKind kind,
                std::uint64_t seed,
                const std::string& scorer_id) {
    out << "# kind=" << to_string(kind) << " n=" << curve.size() << " seed=" << seed << " scorer=" << scorer_id
        << '\n';
    out << "factor,mean_similarity\n";
    for (const auto& p : curve) {
        out << format_double(p.factor) << ',' << format_double(p.mean_similarity) << '\n';
    }
}

}  // namespace tokenrank
