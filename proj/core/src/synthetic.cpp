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

#include "tokenrank/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "tokenrank/error.hpp"
#include "tokenrank/half.hpp"

namespace tokenrank {

namespace {

using Vec = std::vector<double>;

Vec
gaussian(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> z(0.0, 1.0);
    Vec v(n);
    for (auto& x : v) {
        x = z(rng);
    }
    return v;
}

Vec
unit(Vec v) {
    double n = 0.0;
    for (double x : v) {
        n += x * x;
    }
    n = std::sqrt(n);
    for (auto& x : v) {
        x /= n;
    }
    return v;
}

Vec
random_unit(std::size_t n, std::mt19937_64& rng) {
    return unit(gaussian(n, rng));
}

// base + noise * unit-variance-per-norm perturbation.
Vec
jitter(const Vec& base, double noise, std::mt19937_64& rng) {
    Vec g = gaussian(base.size(), rng);
    const double scale = noise / std::sqrt(static_cast<double>(base.size()));
    Vec out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        out[i] = base[i] + scale * g[i];
    }
    return out;
}

std::string
id(const char* prefix, std::size_t g, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%02zu_%02zu", prefix, g, i);
    return buf;
}

TokenGrid
make_grid(const SyntheticConfig& cfg,
          const std::vector<Vec>& protos,
          const std::vector<Vec>& background,
          std::size_t planted,
          std::mt19937_64& rng) {
    const std::size_t M = static_cast<std::size_t>(cfg.rows) * cfg.cols;
    std::vector<std::size_t> proto_idx(protos.size());
    std::iota(proto_idx.begin(), proto_idx.end(), 0);
    std::shuffle(proto_idx.begin(), proto_idx.end(), rng);
    std::vector<std::size_t> slots(M);
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);

    std::vector<float> tokens(M * cfg.dim);
    for (std::size_t s = 0; s < M; ++s) {
        const Vec& base = s < planted ? protos[proto_idx[s]] : background[rng() % background.size()];
        const Vec v = jitter(base, cfg.token_noise, rng);
        float* out = &tokens[slots[s] * cfg.dim];
        for (std::size_t d = 0; d < cfg.dim; ++d) {
            out[d] = round_to_half(static_cast<float>(v[d]));
        }
    }
    return TokenGrid::dense(std::move(tokens), cfg.dim, cfg.rows, cfg.cols);
}

GlobalDescriptor
to_global(const Vec& v) {
    std::vector<float> f(v.begin(), v.end());
    return GlobalDescriptor::normalized(std::move(f));
}

}  // namespace

SyntheticCorpus
make_synthetic_corpus(const SyntheticConfig& cfg) {
    const std::size_t M = static_cast<std::size_t>(cfg.rows) * cfg.cols;
    if (cfg.groups < 2 || cfg.images_per_group == 0 || cfg.misleading_groups > cfg.groups || M == 0 ||
        cfg.dim == 0 || cfg.global_dim == 0 || cfg.prototypes == 0 || cfg.background_pool == 0 ||
        cfg.planted > std::min(M, cfg.prototypes) || cfg.query_planted > std::min(M, cfg.prototypes)) {
        fail(ErrorCode::InvalidArgument, "inconsistent synthetic corpus configuration");
    }
    std::mt19937_64 rng(cfg.seed);

    std::vector<Vec> background(cfg.background_pool);
    for (auto& b : background) {
        b = random_unit(cfg.dim, rng);
    }
    std::vector<std::vector<Vec>> protos(cfg.groups);
    std::vector<Vec> centroids(cfg.groups);
    for (std::size_t g = 0; g < cfg.groups; ++g) {
        protos[g].resize(cfg.prototypes);
        for (auto& p : protos[g]) {
            p = random_unit(cfg.dim, rng);
        }
        centroids[g] = random_unit(cfg.global_dim, rng);
    }

    SyntheticCorpus corpus;
    for (std::size_t g = 0; g < cfg.groups; ++g) {
        for (std::size_t i = 0; i < cfg.images_per_group; ++i) {
            auto grid = make_grid(cfg, protos[g], background, cfg.planted, rng);
            auto global = to_global(jitter(centroids[g], cfg.global_noise, rng));
            corpus.database.push_back({id("img_g", g, i), std::move(global), std::move(grid)});
        }
    }
    for (std::size_t g = 0; g < cfg.groups; ++g) {
        const bool misleading = g < cfg.misleading_groups;
        Vec target = centroids[g];
        if (misleading) {
            const Vec& other = centroids[(g + 1) % cfg.groups];
            for (std::size_t d = 0; d < cfg.global_dim; ++d) {
                target[d] = cfg.misleading_own * centroids[g][d] + cfg.misleading_other * other[d];
            }
        }
        auto grid = make_grid(cfg, protos[g], background, cfg.query_planted, rng);
        auto global = to_global(jitter(target, cfg.global_noise, rng));
        char qid[32];
        std::snprintf(qid, sizeof(qid), "q%02zu", g);
        corpus.queries.push_back({qid, std::move(global), std::move(grid)});
        for (std::size_t i = 0; i < cfg.images_per_group; ++i) {
            corpus.qrels.add(qid, {id("img_g", g, i), std::string(misleading ? "misleading" : "clean")});
        }
    }
    return corpus;
}

Image
make_test_image(std::size_t width, std::size_t height, std::uint64_t seed) {
    Image img(width, height);
    std::mt19937_64 rng(seed);
    const auto phase = static_cast<double>(rng() % 360) * 3.14159265358979323846 / 180.0;
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            auto* p = img.at(x, y);
            const double u = static_cast<double>(x) / static_cast<double>(width);
            const double v = static_cast<double>(y) / static_cast<double>(height);
            p[0] = static_cast<std::uint8_t>(std::lround(255.0 * u));
            p[1] = static_cast<std::uint8_t>(std::lround(255.0 * v));
            p[2] = static_cast<std::uint8_t>(std::lround(127.5 + 127.5 * std::sin(6.0 * (u + v) + phase)));
        }
    }
    for (int r = 0; r < 4; ++r) {
        const std::size_t w = 1 + rng() % std::max<std::size_t>(1, width / 3);
        const std::size_t h = 1 + rng() % std::max<std::size_t>(1, height / 3);
        const std::size_t x0 = rng() % (width - w + 1);
        const std::size_t y0 = rng() % (height - h + 1);
        const std::uint8_t c[3] = {static_cast<std::uint8_t>(rng()), static_cast<std::uint8_t>(rng()),
                                   static_cast<std::uint8_t>(rng())};
        for (std::size_t y = y0; y < y0 + h; ++y) {
            for (std::size_t x = x0; x < x0 + w; ++x) {
                std::copy_n(c, 3, img.at(x, y));
            }
        }
    }
    return img;
}

}  // namespace tokenrank
