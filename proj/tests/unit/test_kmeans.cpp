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

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "expect_error.hpp"
#include "oracles.hpp"

namespace {

using namespace tokenrank;

TEST(KMeans, NearestCentroidTiesToSmallerIndex) {
    const std::vector<float> c = {0, 0, 2, 0, 1, 5};
    const std::vector<float> p = {1, 0};
    EXPECT_EQ(nearest_centroid(p, c, 2), 0u);
    EXPECT_DOUBLE_EQ(squared_distance(std::vector<float>{1, 2}, std::vector<float>{4, 6}), 25.0);
}

TEST(KMeans, SeparatesWellSpacedClusters) {
    std::mt19937_64 rng(4);
    std::normal_distribution<float> g(0.0f, 0.05f);
    const std::vector<std::pair<float, float>> centres = {{0, 0}, {5, 5}, {-5, 5}};
    std::vector<float> data;
    for (int i = 0; i < 90; ++i) {
        const auto& c = centres[i % 3];
        data.push_back(c.first + g(rng));
        data.push_back(c.second + g(rng));
    }
    const auto r = kmeans(data, 90, 2, {3, 50, 1});
    EXPECT_TRUE(r.converged);
    for (int i = 3; i < 90; ++i) {
        EXPECT_EQ(r.assignment[i], r.assignment[i % 3]);
    }
    EXPECT_EQ(std::set<std::uint32_t>(r.assignment.begin(), r.assignment.end()).size(), 3u);
}

TEST(KMeans, EveryClusterNonEmptyAndAssignmentIsNearest) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> u(0, 3);
    std::vector<float> data(60 * 3);
    for (auto& v : data) {
        v = static_cast<float>(u(rng));
    }
    const auto r = kmeans(data, 60, 3, {12, 100, 2});
    std::vector<int> count(12, 0);
    for (auto a : r.assignment) {
        ++count[a];
    }
    for (int c : count) {
        EXPECT_GT(c, 0);
    }
    if (r.converged) {
        for (std::size_t i = 0; i < 60; ++i) {
            EXPECT_EQ(r.assignment[i], testkit::ref_nearest(&data[i * 3], r.centroids.data(), 12, 3));
        }
    }
}

TEST(KMeans, Deterministic) {
    std::mt19937_64 rng(2);
    std::normal_distribution<float> g;
    std::vector<float> data(200 * 4);
    for (auto& v : data) {
        v = g(rng);
    }
    const auto a = kmeans(data, 200, 4, {8, 30, 77});
    const auto b = kmeans(data, 200, 4, {8, 30, 77});
    EXPECT_EQ(a.centroids, b.centroids);
    EXPECT_EQ(a.assignment, b.assignment);
}

TEST(KMeans, ArgumentErrors) {
    const std::vector<float> d = {1, 2, 3, 4};
    EXPECT_TR_ERROR(kmeans(d, 2, 2, {3, 10, 0}), ErrorCode::InvalidArgument);
    EXPECT_TR_ERROR(kmeans(d, 2, 2, {0, 10, 0}), ErrorCode::InvalidArgument);
    EXPECT_TR_ERROR(kmeans(d, 3, 2, {1, 10, 0}), ErrorCode::DimensionMismatch);
}

}  // namespace
