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

#include "tokenrank/tokensel.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>

#include "tokenrank/error.hpp"
#include "tokenrank/kmeans.hpp"

namespace tokenrank {

namespace {

std::size_t
parse_count(std::string_view s, std::string_view what) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
        fail(ErrorCode::InvalidArgument, "bad " + std::string(what) + " '" + std::string(s) + "'");
    }
    return v;
}

void
check_target(const TokenGrid& grid, std::size_t target) {
    if (target == 0) {
        fail(ErrorCode::InvalidArgument, "target token count must be positive");
    }
    if (target > grid.size()) {
        fail(ErrorCode::TargetTooLarge,
             "target " + std::to_string(target) + " exceeds M=" + std::to_string(grid.size()));
    }
}

TokenGrid
take_rows(const TokenGrid& grid, const std::vector<std::size_t>& rows) {
    std::vector<float> tokens;
    tokens.reserve(rows.size() * grid.dim());
    std::vector<GridPos> positions;
    positions.reserve(rows.size());
    for (std::size_t i : rows) {
        auto t = grid.token(i);
        tokens.insert(tokens.end(), t.begin(), t.end());
        positions.push_back(grid.positions()[i]);
    }
    return TokenGrid(std::move(tokens), grid.dim(), std::move(positions), grid.grid_rows(), grid.grid_cols());
}

// Token indices grouped by 2x2 window, windows in row-major order, members
// in row-major order within the window.
std::vector<std::vector<std::size_t>>
windows_of(const TokenGrid& grid) {
    const std::size_t rows = grid.grid_rows();
    const std::size_t cols = grid.grid_cols();
    if (grid.size() != rows * cols) {
        fail(ErrorCode::NonRectangularGrid,
             std::to_string(grid.size()) + " tokens do not fill a " + std::to_string(rows) + "x" +
                 std::to_string(cols) + " grid");
    }
    std::vector<std::size_t> at(rows * cols);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto p = grid.positions()[i];
        at[static_cast<std::size_t>(p.row) * cols + p.col] = i;
    }
    std::vector<std::vector<std::size_t>> windows;
    windows.reserve(windows_2x2(rows, cols));
    for (std::size_t r = 0; r < rows; r += 2) {
        for (std::size_t c = 0; c < cols; c += 2) {
            std::vector<std::size_t> members;
            for (std::size_t dr = 0; dr < 2 && r + dr < rows; ++dr) {
                for (std::size_t dc = 0; dc < 2 && c + dc < cols; ++dc) {
                    members.push_back(at[(r + dr) * cols + c + dc]);
                }
            }
            windows.push_back(std::move(members));
        }
    }
    return windows;
}

}  // namespace

SelectionConfig
parse_selection(std::string_view text) {
    if (text == "none") {
        return SelectionConfig::none();
    }
    if (text == "sample2x2") {
        return SelectionConfig::sample2x2();
    }
    if (text == "pool2x2") {
        return SelectionConfig::pool2x2();
    }
    if (text.starts_with("prune:")) {
        return SelectionConfig::prune(parse_count(text.substr(6), "prune count"));
    }
    if (text.starts_with("cluster:")) {
        auto rest = text.substr(8);
        const auto colon = rest.find(':');
        if (colon == std::string_view::npos) {
            return SelectionConfig::cluster(parse_count(rest, "cluster count"));
        }
        const auto count = parse_count(rest.substr(0, colon), "cluster count");
        auto seed_text = rest.substr(colon + 1);
        std::uint64_t seed = 0;
        auto [ptr, ec] = std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), seed);
        if (ec != std::errc() || ptr != seed_text.data() + seed_text.size()) {
            fail(ErrorCode::InvalidArgument, "bad cluster seed '" + std::string(seed_text) + "'");
        }
        return SelectionConfig::cluster(count, seed);
    }
    fail(ErrorCode::InvalidArgument, "unknown selection '" + std::string(text) + "'");
}

std::string
format_selection(const SelectionConfig& config) {
    switch (config.strategy) {
        case SelectionStrategy::None: return "none";
        case SelectionStrategy::Prune: return "prune:" + std::to_string(config.target_count);
        case SelectionStrategy::Cluster:
            return "cluster:" + std::to_string(config.target_count) + ":" + std::to_string(config.seed);
        case SelectionStrategy::Sample2x2: return "sample2x2";
        case SelectionStrategy::Pool2x2: return "pool2x2";
    }
    return "none";
}

TokenGrid
prune_divprune(const TokenGrid& grid, std::size_t m) {
    check_target(grid, m);
    const std::size_t n = grid.size();
    if (m == n) {
        return grid;
    }

    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = squared_distance(grid.token(i), grid.token(j));
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    // first pick: largest nearest-neighbour distance over the full set
    std::size_t first = 0;
    double first_score = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        double nn = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                nn = std::min(nn, dist[i * n + j]);
            }
        }
        if (nn > first_score) {
            first_score = nn;
            first = i;
        }
    }

    std::vector<bool> selected(n, false);
    selected[first] = true;
    std::vector<double> to_selected(n);
    for (std::size_t i = 0; i < n; ++i) {
        to_selected[i] = dist[i * n + first];
    }
    for (std::size_t picked = 1; picked < m; ++picked) {
        std::size_t best = n;
        double best_score = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!selected[i] && to_selected[i] > best_score) {
                best_score = to_selected[i];
                best = i;
            }
        }
        selected[best] = true;
        for (std::size_t i = 0; i < n; ++i) {
            to_selected[i] = std::min(to_selected[i], dist[i * n + best]);
        }
    }

    std::vector<std::size_t> rows;
    rows.reserve(m);
    for (std::size_t i = 0; i < n; ++i) {
        if (selected[i]) {
            rows.push_back(i);
        }
    }
    return take_rows(grid, rows);
}

TokenGrid
select_kmeans(const TokenGrid& grid, std::size_t k, std::uint64_t seed) {
    check_target(grid, k);
    const std::size_t dim = grid.dim();
    KMeansParams params;
    params.num_clusters = k;
    params.seed = seed;
    const auto result = kmeans(grid.tokens(), grid.size(), dim, params);

    std::vector<std::size_t> medoid(k, grid.size());
    std::vector<double> medoid_dist(k, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto c = result.assignment[i];
        const double d = squared_distance(grid.token(i), std::span<const float>(result.centroids).subspan(c * dim, dim));
        if (d < medoid_dist[c]) {
            medoid_dist[c] = d;
            medoid[c] = i;
        }
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return medoid[a] < medoid[b]; });

    std::vector<float> tokens;
    tokens.reserve(k * dim);
    std::vector<GridPos> positions;
    positions.reserve(k);
    for (std::size_t c : order) {
        auto centroid = std::span<const float>(result.centroids).subspan(c * dim, dim);
        tokens.insert(tokens.end(), centroid.begin(), centroid.end());
        positions.push_back(grid.positions()[medoid[c]]);
    }
    return TokenGrid(std::move(tokens), dim, std::move(positions), grid.grid_rows(), grid.grid_cols());
}

TokenGrid
sample_uniform_2x2(const TokenGrid& grid) {
    const auto windows = windows_of(grid);
    std::vector<std::size_t> rows;
    rows.reserve(windows.size());
    for (const auto& w : windows) {
        rows.push_back(w.front());
    }
    return take_rows(grid, rows);
}

TokenGrid
pool_average_2x2(const TokenGrid& grid) {
    const auto windows = windows_of(grid);
    const std::size_t dim = grid.dim();
    std::vector<float> tokens;
    tokens.reserve(windows.size() * dim);
    std::vector<GridPos> positions;
    positions.reserve(windows.size());
    std::vector<double> acc(dim);
    for (const auto& w : windows) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t i : w) {
            auto t = grid.token(i);
            for (std::size_t j = 0; j < dim; ++j) {
                acc[j] += t[j];
            }
        }
        for (std::size_t j = 0; j < dim; ++j) {
            tokens.push_back(static_cast<float>(acc[j] / static_cast<double>(w.size())));
        }
        positions.push_back(grid.positions()[w.front()]);
    }
    return TokenGrid(std::move(tokens), dim, std::move(positions), grid.grid_rows(), grid.grid_cols());
}

TokenGrid
apply_selection(const TokenGrid& grid, const SelectionConfig& config) {
    switch (config.strategy) {
        case SelectionStrategy::None: return grid;
        case SelectionStrategy::Prune: return prune_divprune(grid, config.target_count);
        case SelectionStrategy::Cluster: return select_kmeans(grid, config.target_count, config.seed);
        case SelectionStrategy::Sample2x2: return sample_uniform_2x2(grid);
        case SelectionStrategy::Pool2x2: return pool_average_2x2(grid);
    }
    return grid;
}

}  // namespace tokenrank
