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

// Straightforward reference implementations used to cross-check the library.
// They share no code with it beyond the data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tokenrank/types.hpp"

namespace tokenrank::testkit {

inline double
ref_dot(const float* a, const float* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return s;
}

inline double
ref_sqdist(const float* a, const float* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        s += d * d;
    }
    return s;
}

/// Index of the closest of k centroids (k x n), first one on ties.
inline std::size_t
ref_nearest(const float* v, const float* centroids, std::size_t k, std::size_t n) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
        const double d = ref_sqdist(v, centroids + c * n, n);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

/// Greedy max-min selection recomputed from scratch at every step. Returns
/// the chosen row indices in ascending order.
inline std::vector<std::size_t>
ref_divprune(const std::vector<float>& rows, std::size_t n, std::size_t dim, std::size_t m) {
    if (m >= n) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) {
            all[i] = i;
        }
        return all;
    }
    auto d = [&](std::size_t i, std::size_t j) { return ref_sqdist(&rows[i * dim], &rows[j * dim], dim); };
    std::set<std::size_t> chosen;
    std::size_t first = 0;
    double first_v = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double nn = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                nn = std::min(nn, d(i, j));
            }
        }
        if (nn > first_v) {
            first_v = nn;
            first = i;
        }
    }
    chosen.insert(first);
    while (chosen.size() < m) {
        std::size_t pick = n;
        double pick_v = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (chosen.count(i)) {
                continue;
            }
            double closest = std::numeric_limits<double>::infinity();
            for (auto s : chosen) {
                closest = std::min(closest, d(i, s));
            }
            if (closest > pick_v) {
                pick_v = closest;
                pick = i;
            }
        }
        chosen.insert(pick);
    }
    return {chosen.begin(), chosen.end()};
}

/// AP over the first k ranks; precision at each relevant rank is recounted
/// from the prefix. Normalized by min(|positives|, k).
inline double
ref_average_precision(const std::vector<std::string>& ranked, const std::set<std::string>& positives,
                      std::size_t k) {
    const std::size_t depth = std::min(k, ranked.size());
    double sum = 0.0;
    for (std::size_t r = 0; r < depth; ++r) {
        if (!positives.count(ranked[r])) {
            continue;
        }
        std::size_t hits = 0;
        for (std::size_t j = 0; j <= r; ++j) {
            hits += positives.count(ranked[j]);
        }
        sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
    return sum / static_cast<double>(std::min(positives.size(), k));
}

/// Mean best cosine per query token, mapped onto [0, 1].
inline double
ref_chamfer(const TokenGrid& q, const TokenGrid& c) {
    const std::size_t dim = q.dim();
    double total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const float* a = q.token(i).data();
        const double na = std::sqrt(ref_dot(a, a, dim));
        double best = -2.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            const float* b = c.token(j).data();
            const double nb = std::sqrt(ref_dot(b, b, dim));
            double cos = 0.0;
            if (na > 0.0 && nb > 0.0) {
                cos = std::clamp(ref_dot(a, b, dim) / (na * nb), -1.0, 1.0);
            }
            best = std::max(best, cos);
        }
        total += best;
    }
    return std::clamp((total / static_cast<double>(q.size()) + 1.0) / 2.0, 0.0, 1.0);
}

/// Stable-softmax probability of the first of two logits.
inline double
ref_two_token(double l1, double l0) {
    const double m = std::max(l0, l1);
    const double e1 = std::exp(l1 - m);
    const double e0 = std::exp(l0 - m);
    return e1 / (e0 + e1);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "tokenrank") {
        std::random_device rd;
        const auto base = std::filesystem::temp_directory_path();
        for (int attempt = 0; attempt < 100; ++attempt) {
            auto candidate = base / (tag + "-" + std::to_string(rd()) + std::to_string(rd()));
            if (std::filesystem::create_directory(candidate)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir&
    operator=(const TempDir&) = delete;

    const std::filesystem::path&
    path() const noexcept {
        return path_;
    }
    std::filesystem::path
    operator/(const std::string& name) const {
        return path_ / name;
    }

private:
    std::filesystem::path path_;
};

/// Random grid with integer-valued tokens (many exact ties) or gaussian ones.
inline TokenGrid
random_grid(std::mt19937_64& rng, std::uint16_t rows, std::uint16_t cols, std::size_t dim, bool integral = false) {
    std::vector<float> tokens(static_cast<std::size_t>(rows) * cols * dim);
    std::normal_distribution<float> g(0.0f, 1.0f);
    std::uniform_int_distribution<int> u(-2, 2);
    for (auto& v : tokens) {
        v = integral ? static_cast<float>(u(rng)) : g(rng);
    }
    return TokenGrid::dense(std::move(tokens), dim, rows, cols);
}

}  // namespace tokenrank::testkit
